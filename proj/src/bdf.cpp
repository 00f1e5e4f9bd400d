// bdf.cpp

#include "fkldg/bdf.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

BdfScheme bdf_coefficients(int nu) {
  if (nu < 1 || nu > 6)
    throw std::runtime_error(fmt::format("bdf_coefficients: order {} outside [1, 6]", nu));
  // Nodes t_j = -j in units of tau; d_j is the derivative of the j-th
  // Lagrange basis at t = 0:
  //   d_j = sum_{i != j} prod_{k != j, i} (0 - t_k) / prod_{k != j} (t_j - t_k).
  std::vector<double> d(nu + 1, 0.0);
  for (int j = 0; j <= nu; ++j) {
    double denom = 1.0;
    for (int k = 0; k <= nu; ++k)
      if (k != j) denom *= static_cast<double>(k - j);
    double num = 0.0;
    for (int i = 0; i <= nu; ++i) {
      if (i == j) continue;
      double prod = 1.0;
      for (int k = 0; k <= nu; ++k)
        if (k != j && k != i) prod *= static_cast<double>(k);
      num += prod;
    }
    d[j] = num / denom;
  }
  BdfScheme s;
  s.nu = nu;
  s.beta = 1.0 / d[0];
  s.a.resize(nu);
  for (int j = 1; j <= nu; ++j) s.a[j - 1] = -d[j] / d[0];
  return s;
}

}  // namespace fkldg
