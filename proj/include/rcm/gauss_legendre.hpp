#pragma once

#include <cstddef>
#include <vector>

namespace rcm {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [a, b]; nodes ascending.
GaussRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

}  // namespace rcm
