#include "speclab/special.hpp"

#include <algorithm>
#include <cmath>

#include "speclab/errors.hpp"

namespace speclab {

SignedLog SignedLog::from_value(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
}

SignedLog add(SignedLog a, SignedLog b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.log_abs < b.log_abs) std::swap(a, b);
    const double r = std::exp(b.log_abs - a.log_abs);
    const double s = 1.0 + (a.sign == b.sign ? r : -r);
    if (s == 0.0) return {};
    return {s > 0 ? a.sign : -a.sign, a.log_abs + std::log(std::abs(s))};
}

SignedLog laguerre_log(int n, double a, double x) {
    if (n <= 0) return SignedLog::one();
    // prev = L_{k-1}, cur = L_k, both scaled by exp(-shift).
    double prev = 1.0;
    double cur = 1.0 + a - x;
    double shift = 0.0;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        const double mag = std::max(std::abs(cur), std::abs(prev));
        if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
            const double l = std::log(mag);
            prev /= mag;
            cur /= mag;
            shift += l;
        }
    }
    if (cur == 0.0) return {};
    return {cur > 0 ? 1 : -1, std::log(std::abs(cur)) + shift};
}

double log_factorial_ratio(double n, double m) { return std::lgamma(n + 1.0) - std::lgamma(m + 1.0); }

double log_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("special", "log_gamma_p requires a > 0");
    if (x < 0.0) throw DomainError("special", "log_gamma_p requires x >= 0");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    const double log_prefix = a * std::log(x) - x - std::lgamma(a + 1.0);
    if (x < a + 1.0) {
        // P(a,x) = x^a e^-x / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 100000; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return log_prefix + std::log(sum);
    }
    // Q(a,x) by Lentz continued fraction, then P = 1 - Q.
    const double tiny = 1e-300;
    double bb = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / bb;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        bb += 2.0;
        d = an * d + bb;
        if (std::abs(d) < tiny) d = tiny;
        c = bb + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    const double log_q = a * std::log(x) - x - std::lgamma(a) + std::log(h);
    return std::log1p(-std::exp(log_q));
}

}  // namespace speclab
