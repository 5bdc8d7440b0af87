#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "speclab/linalg.hpp"
#include "speclab/perturbed.hpp"

namespace speclab {

/// Circle |k - center| = radius, sampled at `nodes` points to start with.
struct ContourSpec {
    cplx center = 0.0;
    double radius = 1.0;
    int nodes = 64;

    void validate() const;
};

/// Per-block ingredients of T(k) = e^{i alpha} J G D(lambda) G with G the
/// square root of the |V| Galerkin block and D = diag(1 / (Lambda_q' - lambda)).
struct BSBlock {
    bool full = false;
    int m = 0;
    std::vector<double> levels;
    std::vector<int> level_index;  // q of each basis element
    ComplexMatrix G;
};

struct BSContext {
    LandauConfig cfg;
    double alpha = 0;
    int sign_J = -1;
    cplx phase = -1.0;
    double v_sup = 0;
    std::vector<BSBlock> blocks;
};

BSContext make_bs_context(const HamiltonianBlocks& hb);

struct BSSplit {
    ComplexMatrix singular;  // phase G P_q G / k
    ComplexMatrix regular;   // phase G R_q(k) G
};

struct BSOperator {
    cplx k;
    int level_q = 0;
    ComplexMatrix matrix;
    std::optional<BSSplit> split;
};

/// T(k) on one block, at lambda = Lambda_q - k. Throws PoleError when lambda
/// sits on a retained level.
ComplexMatrix block_resolvent(const BSBlock& blk, cplx phase, int q, double b, cplx k);
/// dT/dk on one block.
ComplexMatrix block_resolvent_derivative(const BSBlock& blk, cplx phase, int q, double b, cplx k);

/// Full block-diagonal T(k) with its singular/regular split.
BSOperator weighted_resolvent(cplx k, int q, const BSContext& ctx, bool with_split = true);
BSOperator weighted_resolvent(cplx k, int q, const LandauConfig& cfg, const PotentialSpec& pot,
                              bool with_split = true);

/// (sum sigma_i^p)^{1/p}.
double schatten_norm(const ComplexMatrix& m, double p);

struct SplitReport {
    double reconstruction_error = 0;  // ||singular + regular - T|| / ||T||
    double derivative_error = 0;      // finite difference vs analytic derivative of the regular part
    double spectral_identity_error = 0;  // nonzero spectra of G P_q G versus P_q V P_q
    bool passed = false;
};

/// Throws ConsistencyError if the split does not reconstruct the operator.
SplitReport singular_split_check(const BSOperator& op, const BSContext& ctx);

/// Cutoff of the singular part at s/2: G P_q G = B_big + B_small with B_big
/// the spectral part above s/2.
struct CutoffReport {
    double s = 0;
    std::size_t rank_big = 0;
    double norm_small = 0;  // largest eigenvalue kept in B_small
    double reconstruction_error = 0;
};
CutoffReport cutoff_split_check(const BSContext& ctx, int q, double s);

/// prod (1 + mu) exp(sum_{k=1}^{ceil(p)-1} (-mu)^k / k) over eigenvalues mu of K.
cplx regularized_det(const ComplexMatrix& K, double p);

struct BSCheck {
    double min_dist_to_minus_one = 0;  // min |1 + mu_i(T)|
    cplx det_value;                    // det(I + T)
    cplx det_p_value;                  // regularized determinant at the given p
};

BSCheck bs_check(cplx lambda, int q, const BSContext& ctx, double p);

/// det(I + T(k)) for one block.
cplx block_det(const BSBlock& blk, cplx phase, int q, double b, cplx k);
/// det(I + T(k)) over all blocks.
cplx full_det(const BSContext& ctx, int q, cplx k);

struct IndexDiagnostics {
    int nodes_used = 0;
    double max_phase_step = 0;
    double min_abs = 0;
    double max_abs = 0;
};

/// Winding number of f along the circle by phase unwrapping, doubling the
/// node count until the count is stable across one doubling and the largest
/// phase step is below pi/4. Throws ContourError when f (nearly) vanishes
/// on the contour and ResolutionError if 65536 nodes do not settle it.
int index_contour(const std::function<cplx(cplx)>& f, const ContourSpec& gamma,
                  IndexDiagnostics* diag = nullptr);

struct CharacteristicValue {
    cplx k;
    int multiplicity = 0;      // index on the small circle (summed over blocks)
    double circle_radius = 0;  // radius of that circle
    std::vector<int> blocks;   // angular momenta of the blocks it came from (or 0 for full)
};

struct UnresolvedCell {
    int block_m = 0;
    int expected = 0;  // annulus index of the block
    int found = 0;     // multiplicity located
};

struct CharacteristicResult {
    std::vector<CharacteristicValue> values;  // sorted by (Re k, Im k)
    int annulus_index = 0;                    // sum of block annulus indices
    std::vector<UnresolvedCell> unresolved;
};

/// Zeros of k -> det(I + T(k)) in r < |k| < r0 by a polar grid scan,
/// Newton refinement and a small-circle index per zero.
CharacteristicResult characteristic_values(double r, double r0, int q, const BSContext& ctx, int grid = 40,
                                           int contour_nodes = 64);

struct AssumptionReport {
    double smallest_singular_value = 1.0;
    bool invertible = true;
    std::size_t kernel_dim = 0;
    double kernel_threshold = 1e-10;
};

/// I - e^{i alpha} A'(0) Pi_q with A'(0) = -J G sum_{q' != q} P_q' / (Lambda_q' - Lambda_q) G
/// and Pi_q the projection onto the numerical kernel of G P_q G. The factor
/// e^{i alpha} can be overridden by any complex number.
AssumptionReport assumption_check(int q, const BSContext& ctx, std::optional<cplx> eialpha_override = std::nullopt);

/// Reciprocals of the nonzero eigenvalues of A'(0) Pi_q: the values of
/// e^{i alpha} at which the check above fails.
std::vector<cplx> degenerate_phases(int q, const BSContext& ctx);

}  // namespace speclab
