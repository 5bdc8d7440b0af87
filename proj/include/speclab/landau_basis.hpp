#pragma once

#include <vector>

#include "speclab/linalg.hpp"
#include "speclab/potential.hpp"
#include "speclab/special.hpp"

namespace speclab {

/// Field strength and truncation of the Landau eigenbasis.
struct LandauConfig {
    double b = 1.0;
    int q_max = 5;
    int j_max = 60;

    void validate() const;  // throws ParameterError
};

/// Basis element phi_{q,j}; angular momentum m = j - q.
struct BasisIndex {
    int q = 0;
    int j = 0;
    int m() const { return j - q; }
    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Lambda_q = 2bq.
double landau_level(int q, double b);

/// phi_{q,j}(r, theta) in symmetric gauge.
cplx eval_basis(const BasisIndex& idx, const LandauConfig& cfg, double r, double theta);

/// ln|R_{q,j}(r)| and its sign, where phi_{q,j} = R_{q,j}(r) e^{i m theta}.
SignedLog radial_basis_log(const BasisIndex& idx, double b, double r);

/// Laguerre data of one basis element: R ~ xi^{a/2} L_n^a(xi) e^{-xi/2}.
struct RadialIndex {
    int n = 0;
    int a = 0;
};
RadialIndex radial_index(int q, int j);

/// Normalized radial overlap
///   sqrt(n!/(n+a)!) sqrt(n'!/(n'+a')!) int_0^inf U(sqrt(2 xi/b)) xi^{(a+a')/2} L_n^a L_n'^a' e^{-xi} dxi
/// for a radial (or the radial part of a separable) profile, in signed log form.
SignedLog radial_integral_log(RadialIndex left, RadialIndex right, const Profile& profile, double b);

/// <phi_{q,j}, U phi_{q',j'}> with j' = j - q + q' (same angular momentum).
double radial_matrix_element(int q, int qp, int j, const Profile& profile, const LandauConfig& cfg);
SignedLog radial_matrix_element_log(int q, int qp, int j, const Profile& profile, const LandauConfig& cfg);

/// Every retained (q, j), ordered by q then j.
std::vector<BasisIndex> full_basis(const LandauConfig& cfg);

/// Hermitian Galerkin matrix <phi_a, U phi_b> over the given basis list.
/// Radial profiles couple only equal m; separable ones pick up the Fourier
/// coefficient of u0; Grid2D goes through polar quadrature.
ComplexMatrix galerkin_matrix(const std::vector<BasisIndex>& basis, const Profile& profile,
                              const LandauConfig& cfg);

struct BasisDiagnostics {
    double orthonormality_defect = 0;  // max |<phi,phi'> - delta|
    double eigen_defect = 0;           // max relative error of H0 phi = Lambda phi
    int functions_checked = 0;
};

/// Orthonormality by radial Gauss-Legendre over eval_basis, and the
/// eigenrelation by 6th-order finite differences in Cartesian coordinates,
/// for q <= q_limit and |m| <= m_limit.
BasisDiagnostics basis_diagnostics(const LandauConfig& cfg, int q_limit, int m_limit);

}  // namespace speclab
