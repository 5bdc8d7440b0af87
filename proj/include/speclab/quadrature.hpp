#pragma once

#include <memory>
#include <vector>

namespace speclab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;      // linear weights (may underflow to 0)
    std::vector<double> log_weights;  // ln(weight), finite where weight > 0 in exact arithmetic
};

/// Gauss-Legendre rule on [-1, 1]. Rules are computed once per size and
/// shared; the returned pointer stays valid for the program lifetime.
std::shared_ptr<const QuadratureRule> gauss_legendre(int n);

/// Generalized Gauss-Laguerre rule for the weight x^alpha e^-x on
/// [0, inf), alpha > -1, from the Golub-Welsch eigenproblem of the
/// Jacobi matrix. Cached per (alpha, n).
std::shared_ptr<const QuadratureRule> gauss_laguerre(double alpha, int n);

}  // namespace speclab
