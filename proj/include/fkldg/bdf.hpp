// bdf.hpp
//
// Backward differentiation formulas in the normalized form
//   y^(n+1) - sum_{j=1..nu} a_j y^(n+1-j) = tau beta g(t_{n+1}, y^(n+1)).
// Orders 1 through 6 (the zero-stable range).
#pragma once

#include <vector>

namespace fkldg {

struct BdfScheme {
  int nu = 1;
  double beta = 1.0;
  std::vector<double> a;  // a[j-1] multiplies y^(n+1-j)
};

// Coefficients from the derivative of the interpolating polynomial through
// the nu+1 most recent states, evaluated at the new time. Throws for
// nu outside [1, 6].
BdfScheme bdf_coefficients(int nu);

}  // namespace fkldg
