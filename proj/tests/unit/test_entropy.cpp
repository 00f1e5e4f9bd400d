// Entropy kernel: logistic map, entropy density, derivative identities,
// the C_f budget constant, and overflow-free evaluation at extreme w.
#include "fkldg/entropy.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace fkldg::entropy;

TEST_CASE("logistic map hand values and symmetry") {
  CHECK(u(0.0) == doctest::Approx(0.5));
  CHECK(u(1.0) == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-15));
  for (double w : {0.1, 0.5, 2.0, 10.0, 35.0}) {
    CHECK(u(w) + u(-w) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("logistic map stays strictly inside (0,1) for any argument") {
  const double vals[] = {0.0,    36.7,   37.0,  100.0, 500.0, 1e6,
                         1e300,  -36.7,  -37.0, -100.0, -500.0, -1e6,
                         -1e300, std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()};
  for (double w : vals) {
    const double c = u(w);
    CHECK(c > 0.0);
    CHECK(c < 1.0);
    CHECK(std::isfinite(s_from_w(w)));
    CHECK(std::isfinite(s2(w)));
  }
  // Without the nudge 1/(1+e^-w) rounds to exactly 1 above w ~ 36.8.
  CHECK(1.0 / (1.0 + std::exp(-40.0)) == 1.0);
  CHECK(u(40.0) < 1.0);
}

TEST_CASE("derivative identities") {
  CHECK(s2(0.0) == doctest::Approx(4.0));
  CHECK(s2_prime(1.0) == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-15));
  for (double w : {-3.0, -0.7, 0.0, 0.4, 2.5}) {
    const double c = u(w);
    // u' = u(1-u) and s'' = 1/(u(1-u)).
    CHECK(u_prime(w) == doctest::Approx(c * (1.0 - c)).epsilon(1e-13));
    CHECK(s2(w) * u_prime(w) == doctest::Approx(1.0).epsilon(1e-13));
    // Finite differences of u and of s'' against the closed forms.
    const double h = 1e-6;
    CHECK((u(w + h) - u(w - h)) / (2.0 * h) == doctest::Approx(u_prime(w)).epsilon(1e-8));
    CHECK((s2(w + h) - s2(w - h)) / (2.0 * h) == doctest::Approx(s2_prime(w)).epsilon(1e-8));
    // s(u(w)) via the stable path agrees with the direct c-space formula.
    CHECK(s_from_w(w) == doctest::Approx(s_of_c(c)).epsilon(1e-13));
    // s'(c) inverts u.
    CHECK(s_prime_of_c(c) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("entropy density range") {
  // Minimum 0 at c = 1/2, suprema log 2 at the endpoints.
  CHECK(s_of_c(0.5) == doctest::Approx(0.0).scale(1.0));
  CHECK(s_from_w(0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(s_of_c(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(s_of_c(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(s_from_w(500.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (double c : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    CHECK(s_of_c(c) >= 0.0);
    CHECK(s_of_c(c) <= std::log(2.0));
  }
}

TEST_CASE("reaction-entropy budget constant bounds c(1-c)|s'(c)|") {
  // f(c) = c (1-c) log(c/(1-c)); golden-section maximum is about 0.2239.
  auto f = [](double c) { return c * (1.0 - c) * std::abs(s_prime_of_c(c)); };
  double lo = 0.5, hi = 1.0 - 1e-12;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    if (f(x1) < f(x2)) {
      lo = x1;
      x1 = x2;
      x2 = lo + phi * (hi - lo);
    } else {
      hi = x2;
      x2 = x1;
      x1 = hi - phi * (hi - lo);
    }
  }
  const double fmax = f(0.5 * (lo + hi));
  CHECK(fmax == doctest::Approx(0.2239).epsilon(1e-3));
  CHECK(fmax <= cf_bound);
  // Dense sweep over both halves as a second guard.
  for (int i = 1; i < 2000; ++i) CHECK(f(i / 2000.0) <= cf_bound);
}

TEST_CASE("stable softplus path agrees with the naive formula in range") {
  for (double w : {-30.0, -5.0, -0.1, 0.0, 0.1, 5.0, 30.0}) {
    const double naive = u(w) * w - std::log(1.0 + std::exp(w)) + std::log(2.0);
    CHECK(s_from_w(w) == doctest::Approx(naive).epsilon(1e-12).scale(1.0));
  }
  // Where the naive formula overflows, the stable one still lands on log 2.
  CHECK(std::isinf(std::exp(800.0)));
  CHECK(s_from_w(800.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}
