#pragma once

// Small seeded generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "speclab/linalg.hpp"

namespace gen {

using speclab::ComplexMatrix;
using speclab::cplx;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    cplx complex_normal() { return {normal(), normal()}; }

private:
    std::mt19937_64 eng_;
};

inline ComplexMatrix general(Rng& g, std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = g.complex_normal();
    return m;
}

inline ComplexMatrix hermitian(Rng& g, std::size_t n) {
    const ComplexMatrix a = general(g, n);
    return (a + a.adjoint()) * cplx(0.5);
}

// Polynomial with the given roots, coefficients low to high.
inline std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{1.0};
    for (const cplx& z : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= z * c[i];
        }
        c = next;
    }
    return c;
}

inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

}  // namespace gen
