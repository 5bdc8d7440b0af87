#pragma once

#include <cstddef>
#include <vector>

#include "speclab/landau_basis.hpp"
#include "speclab/potential.hpp"

namespace speclab {

/// Eigenvalues s_0 >= s_1 >= ... of the compression p_q U p_q, kept as
/// natural logs so thresholds far below the double range still count.
/// values[i] == exp(log_values[i]) and underflows to 0 for tiny entries.
struct CountingFunction {
    std::vector<double> log_values;
    std::vector<double> values;
    int level_q = 0;
    int j_max = 0;

    std::size_t size() const { return log_values.size(); }
    // ln of the smallest retained eigenvalue; below it the truncation decides N.
    double log_floor() const;
};

/// Builds a CountingFunction from unsorted natural-log eigenvalues.
CountingFunction make_counting_function(std::vector<double> log_values, int level_q, int j_max);

/// Diagonal elements <phi_{q,j}, U phi_{q,j}> for j = 0..j_max (radial U).
CountingFunction toeplitz_eigs_radial(int q, const Profile& profile, const LandauConfig& cfg);

/// Eigenvalues of the Galerkin matrix of U on level q (any profile, meant
/// for Grid2D and non-radial ones).
CountingFunction toeplitz_eigs_general(int q, const Profile& profile, const LandauConfig& cfg);

/// N(r) = #{s > r}.
std::size_t counting_query(const CountingFunction& cf, double r);
std::size_t counting_query_log(const CountingFunction& cf, double log_r);

/// Parameters of the model laws; only the fields of the chosen class matter.
struct ModelParams {
    double b = 1.0;
    double m = 2.0;        // A1 decay exponent
    AngularProfile u0;     // A1 angular profile
    double mu = 1.0;       // A2
    double beta = 1.0;     // A2
};

ModelParams model_params(const Profile& profile, double b);

/// Leading-order counting law for decay class A1/A2/A3 at r in (0, 1/e).
double model_phi(DecayClass cls, const ModelParams& params, double r);
/// Same, taking ln r so r may be far below the double range.
double model_phi_log(DecayClass cls, const ModelParams& params, double log_r);

/// C_m = (b / 4 pi) int u0^{2/m}.
double model_c_m(const ModelParams& params);

struct FitRow {
    double log_r = 0;
    std::size_t N = 0;
    double phi = 0;
    double ratio = 0;  // N / phi
};

struct FitReport {
    std::vector<FitRow> rows;
    double slope = 0;                 // least squares of ln N against ln(1/r), over rows with N > 0
    std::size_t dropped = 0;          // grid points at or below the truncation floor
    bool out_of_class = false;        // flat spectrum: no decay to fit
};

/// Ratio table and log-log slope over the resolvable part of log_r_grid.
/// Throws RangeError when no grid point lies above the truncation floor.
FitReport asymptotic_fit(const CountingFunction& cf, DecayClass cls, const ModelParams& params,
                         const std::vector<double>& log_r_grid);

}  // namespace speclab
