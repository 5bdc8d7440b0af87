#pragma once

#include <cstddef>
#include <vector>

#include "speclab/perturbed.hpp"
#include "speclab/toeplitz.hpp"

namespace speclab {

/// Sum over entries (with multiplicity) of dist(lambda, {2bq : q <= q_max})^p / (1 + |lambda|)^{2p}.
double lt_global_sum(const ComplexSpectrum& spec, double b, int q_max, double p);

/// Pairwise (tree) summation; the order depends only on the input order.
double pairwise_sum(const std::vector<double>& terms);

struct MomentReport {
    double p = 2;
    double global_sum = 0;
    double local_sum = 0;        // sum |k|^p over r < |k| < r0
    double integral_form = 0;    // int_r^r0 p t^{p-1} n(t, r0) dt
    double boundary_term = 0;    // r^p n(r, r0)
    double ratio = 0;            // local_sum / integral_form
    double identity_residual = 0;  // |local_sum - integral_form - boundary_term| / local_sum
    double mu_sum = 0;           // sum mu^p, mu = Re(-J k e^{-i alpha})
    double mu_integral_form = 0; // same stepwise integral for the mu counting function
    double delta = 0;            // max |Im z| / Re z
    bool sandwich_holds = true;  // mu_sum <= local_sum <= (1 + delta^2)^{p/2} mu_sum
    std::size_t outside = 0;     // entries with Re(-J k e^{-i alpha}) <= 0
    std::size_t counted = 0;
    double toeplitz_integral = 0;  // int_r^r0 p t^{p-1} N_toeplitz(t) dt
};

/// Local moment report for the cluster of spec (k measured from its level)
/// inside r < |k| < r0. `counting` may be empty (size 0), in which case the
/// Toeplitz integral is 0.
MomentReport lt_local_comparison(const ComplexSpectrum& spec, const CountingFunction& counting, double p,
                                 double r, double r0, double alpha, int sign_J);

/// int_a^top p t^{p-1} n(t) dt for the step function n(t) = #{x in xs : x > t},
/// integrated piece by piece between consecutive jumps.
double stepwise_moment_integral(std::vector<double> xs, double p, double a, double top);

}  // namespace speclab
