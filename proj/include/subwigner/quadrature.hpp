#pragma once
#include <vector>

namespace subwigner {

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of the given order; nodes are Legendre roots obtained
// by Newton iteration from Chebyshev initial guesses.
GaussLegendre gauss_legendre(int order);

// The same rule mapped to (a, b).
GaussLegendre gauss_legendre(int order, double a, double b);

}  // namespace subwigner
