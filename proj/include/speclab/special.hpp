#pragma once

#include <cmath>
#include <limits>

namespace speclab {

/// A real number stored as sign * exp(log_abs). sign is -1, 0 or +1;
/// zero is (0, -inf).
struct SignedLog {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();

    static SignedLog from_value(double v);
    static SignedLog zero() { return {}; }
    static SignedLog one() { return {1, 0.0}; }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    bool is_zero() const { return sign == 0; }

    friend SignedLog operator*(SignedLog a, SignedLog b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.sign * b.sign, a.log_abs + b.log_abs};
    }
};

// Sum of two signed-log numbers.
SignedLog add(SignedLog a, SignedLog b);

/// Generalized Laguerre polynomial L_n^a(x) by the three-term recurrence,
/// rescaled at every step so the value never overflows or underflows.
SignedLog laguerre_log(int n, double a, double x);

/// ln(n! / m!) computed from log-gamma.
double log_factorial_ratio(double n, double m);

/// ln P(a, x): logarithm of the regularized lower incomplete gamma
/// function gamma(a, x) / Gamma(a), a > 0, x >= 0. Returns -inf at x = 0.
double log_gamma_p(double a, double x);

}  // namespace speclab
