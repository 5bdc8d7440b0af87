#pragma once

#include <optional>
#include <vector>

#include "speclab/landau_basis.hpp"
#include "speclab/linalg.hpp"
#include "speclab/potential.hpp"

namespace speclab {

/// One diagonal block of the truncated H = H0 + e^{i alpha} J |V|. Radial
/// potentials give one block per angular momentum; anything else a single
/// full block.
struct HamiltonianBlock {
    bool full = false;
    int m = 0;
    std::vector<BasisIndex> basis;
    std::vector<double> levels;  // 2bq of each basis element
    ComplexMatrix V;             // Galerkin matrix of |V|
    ComplexMatrix H;
};

struct HamiltonianBlocks {
    LandauConfig cfg;
    double alpha = 0;
    int sign_J = -1;
    cplx phase = -1.0;  // e^{i alpha} J
    double v_sup = 0;   // sup |V|
    std::vector<HamiltonianBlock> blocks;

    std::size_t total_size() const;
};

HamiltonianBlocks build_hamiltonian(const LandauConfig& cfg, const PotentialSpec& pot);

struct SpectrumEntry {
    cplx lambda;
    cplx k;  // Lambda_q - lambda for the spectrum's level
    bool full_block = false;
    int block_m = 0;
    int multiplicity = 1;
    std::size_t cluster = 0;  // index of the cluster's first entry in the merged list
    double residual = 0;
};

struct ComplexSpectrum {
    double b = 1.0;
    int q_max = 0;
    double v_sup = 0;
    int level_q = 0;
    std::vector<SpectrumEntry> entries;

    double level() const { return 2.0 * b * level_q; }
};

/// Eigenvalues of every block, merged in block order (then (Re, Im) inside a
/// block). Multiplicities come from clustering across blocks at radius
/// 1e-7 * 2b. Residuals are ||Hv - lambda v|| / ||H|| for simple values and
/// sigma_min(H - c) / ||H|| inside clusters, c the cluster mean in that block.
ComplexSpectrum discrete_spectrum(const HamiltonianBlocks& blocks, int level_q = 0, double tol = kDefaultTol);

/// Numerical-zero threshold separating perturbed values from level remnants.
double zero_threshold(double v_sup);

/// Entries with zero_threshold < |k| < r0, k = Lambda_q - lambda.
ComplexSpectrum cluster_near_level(const ComplexSpectrum& spec, int q, double r0);

/// Entries with r < |k| < r0 relative to the spectrum's level.
ComplexSpectrum annulus_entries(const ComplexSpectrum& spec, double r, double r0);

struct SectorSpec {
    double alpha = 0;
    int sign_J = -1;
    double delta = 0.5;
    double r = 0.01;
    double r0 = 0.3;

    void validate(std::optional<double> b = std::nullopt) const;
};

/// z = -J k e^{-i alpha}: r <= Re z <= r0 and |Im z| <= delta Re z.
bool sector_test(cplx k, const SectorSpec& sec);

/// Sum of multiplicities over eigenvalues with r < |k| < r0, measured from level q.
std::size_t annulus_count(const ComplexSpectrum& spec, int q, double r, double r0);

struct LocalizationReport {
    std::size_t inside = 0;
    std::size_t outside = 0;
    double worst_angle = 0;  // max |arg(-J k e^{-i alpha})|
};

LocalizationReport localization_report(const ComplexSpectrum& spec, const SectorSpec& sec);

}  // namespace speclab
