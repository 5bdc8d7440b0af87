#include "speclab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <utility>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

// Implicit QL on a symmetric tridiagonal matrix, tracking only the first
// row of the eigenvector matrix (all Golub-Welsch needs).
// diag: n entries, off: n entries with off[i] coupling i and i+1, off[n-1] = 0.
void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first) {
    const int n = static_cast<int>(diag.size());
    first.assign(n, 0.0);
    first[0] = 1.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 100) throw ConvergenceError("gauss rule: tridiagonal QL stalled", l);
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                bool underflow = false;
                for (; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    f = first[i + 1];
                    first[i + 1] = s * first[i] + c * f;
                    first[i] = c * first[i] - s * f;
                }
                if (underflow) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
}

QuadratureRule make_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // refresh derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    for (int i = 0; i < n; ++i) rule.log_weights[i] = std::log(rule.weights[i]);
    return rule;
}

QuadratureRule make_laguerre(double alpha, int n) {
    std::vector<double> diag(n), off(n, 0.0), first;
    for (int i = 0; i < n; ++i) {
        diag[i] = 2.0 * i + alpha + 1.0;
        if (i + 1 < n) off[i] = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
    }
    tridiagonal_ql(diag, off, first);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] < diag[b]; });
    const double log_mu0 = std::lgamma(alpha + 1.0);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    rule.log_weights.resize(n);
    for (int r = 0; r < n; ++r) {
        const int i = order[r];
        rule.nodes[r] = diag[i];
        const double z = std::abs(first[i]);
        rule.log_weights[r] = z > 0 ? log_mu0 + 2.0 * std::log(z) : -std::numeric_limits<double>::infinity();
        rule.weights[r] = std::exp(rule.log_weights[r]);
    }
    return rule;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_legendre(int n) {
    if (n < 1) throw ParameterError("quadrature", "Gauss-Legendre needs n >= 1");
    static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
    {
        std::lock_guard lock(cache_mutex());
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(make_legendre(n));
    std::lock_guard lock(cache_mutex());
    return cache.emplace(n, std::move(rule)).first->second;
}

std::shared_ptr<const QuadratureRule> gauss_laguerre(double alpha, int n) {
    if (n < 1) throw ParameterError("quadrature", "Gauss-Laguerre needs n >= 1");
    if (!(alpha > -1.0)) throw ParameterError("quadrature", "Gauss-Laguerre needs alpha > -1");
    static std::map<std::pair<double, int>, std::shared_ptr<const QuadratureRule>> cache;
    const auto key = std::make_pair(alpha, n);
    {
        std::lock_guard lock(cache_mutex());
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(make_laguerre(alpha, n));
    std::lock_guard lock(cache_mutex());
    return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace speclab
