// entropy.hpp
//
// Logistic change of variable c = u(w) and the associated entropy density
//   s(c) = c log c + (1 - c) log(1 - c) + log 2.
// Working in w keeps every evaluated concentration strictly inside (0, 1);
// all formulas below are branch-split so no intermediate exp overflows.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fkldg::entropy {

// Arguments are clamped to this magnitude before exponentiation; exp(500)
// is still finite in double precision.
inline constexpr double w_clip = 500.0;

// Bound on max_c |c (1-c) s'(c)| used in the entropy budget.
inline constexpr double cf_bound = 0.25;

// u(w) = e^w / (1 + e^w). The final nudge keeps the value below 1 even where
// rounding of 1/(1+e^-w) would land exactly on 1 (w above ~36.7); the lower
// side stays positive for all clipped w on its own.
inline double u(double w) {
  w = std::clamp(w, -w_clip, w_clip);
  double val;
  if (w >= 0.0) {
    val = 1.0 / (1.0 + std::exp(-w));
  } else {
    const double t = std::exp(w);
    val = t / (1.0 + t);
  }
  return std::min(val, 1.0 - std::numeric_limits<double>::epsilon() / 2);
}

// u'(w) = u (1 - u), evaluated without cancellation.
inline double u_prime(double w) {
  w = std::clamp(std::abs(w), 0.0, w_clip);
  const double t = std::exp(-w);
  const double d = 1.0 + t;
  return t / (d * d);
}

// s''(u(w)) = 1 / (u (1 - u)) = e^-w + 2 + e^w.
inline double s2(double w) {
  w = std::clamp(w, -w_clip, w_clip);
  const double t = std::exp(-std::abs(w));
  const double d = 1.0 + t;
  return std::exp(std::abs(w)) * d * d;
}

// d/dw s''(u(w)) = e^w - e^-w.
inline double s2_prime(double w) {
  w = std::clamp(w, -w_clip, w_clip);
  return std::exp(w) - std::exp(-w);
}

// log(1 + e^w), split as max(w, 0) + log1p(e^-|w|) to stay finite.
inline double softplus(double w) {
  return std::max(w, 0.0) + std::log1p(std::exp(-std::abs(w)));
}

// s(u(w)) evaluated directly in w: s(u(w)) = u(w) w - log(1 + e^w) + log 2.
inline double s_from_w(double w) {
  w = std::clamp(w, -w_clip, w_clip);
  return u(w) * w - softplus(w) + std::numbers::ln2;
}

// s(c) for c in [0, 1] with the limits s(0) = s(1) = log 2 taken by continuity.
inline double s_of_c(double c) {
  const double t1 = c > 0.0 ? c * std::log(c) : 0.0;
  const double t2 = c < 1.0 ? (1.0 - c) * std::log(1.0 - c) : 0.0;
  return t1 + t2 + std::numbers::ln2;
}

// s'(c) = log(c / (1 - c)), the inverse of u.
inline double s_prime_of_c(double c) { return std::log(c / (1.0 - c)); }

}  // namespace fkldg::entropy
