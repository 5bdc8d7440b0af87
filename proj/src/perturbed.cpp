#include "speclab/perturbed.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"

namespace speclab {

std::size_t HamiltonianBlocks::total_size() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.basis.size();
    return n;
}

HamiltonianBlocks build_hamiltonian(const LandauConfig& cfg, const PotentialSpec& pot) {
    cfg.validate();
    validate(pot);
    HamiltonianBlocks out;
    out.cfg = cfg;
    out.alpha = pot.alpha;
    out.sign_J = pot.sign_J;
    out.phase = pot.phase();
    out.v_sup = sup_norm(pot.profile);
    if (is_radial(pot.profile)) {
        for (int m = -cfg.q_max; m <= cfg.j_max; ++m) {
            HamiltonianBlock blk;
            blk.m = m;
            for (int q = 0; q <= cfg.q_max; ++q)
                if (q + m >= 0 && q + m <= cfg.j_max) blk.basis.push_back({q, q + m});
            out.blocks.push_back(std::move(blk));
        }
    } else {
        HamiltonianBlock blk;
        blk.full = true;
        blk.basis = full_basis(cfg);
        out.blocks.push_back(std::move(blk));
    }
    parallel_for(out.blocks.size(), [&](std::size_t i) {
        auto& blk = out.blocks[i];
        for (const auto& bi : blk.basis) blk.levels.push_back(landau_level(bi.q, cfg.b));
        blk.V = galerkin_matrix(blk.basis, pot.profile, cfg);
        blk.H = ComplexMatrix::diagonal(std::span<const double>(blk.levels)) + out.phase * blk.V;
    });
    return out;
}

ComplexSpectrum discrete_spectrum(const HamiltonianBlocks& hb, int level_q, double tol) {
    if (level_q < 0 || level_q > hb.cfg.q_max) throw ParameterError("perturbed", "level q outside the truncation");
    const double b = hb.cfg.b;
    std::vector<EigenResult> parts(hb.blocks.size());
    parallel_for(hb.blocks.size(), [&](std::size_t i) { parts[i] = eig_general(hb.blocks[i].H, tol, false); });

    ComplexSpectrum spec;
    spec.b = b;
    spec.q_max = hb.cfg.q_max;
    spec.v_sup = hb.v_sup;
    spec.level_q = level_q;
    const double level = landau_level(level_q, b);
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t r = 0; r < parts[i].values.size(); ++r) {
            SpectrumEntry e;
            e.lambda = parts[i].values[r];
            e.k = level - e.lambda;
            e.full_block = hb.blocks[i].full;
            e.block_m = hb.blocks[i].m;
            e.residual = parts[i].residuals[r];
            spec.entries.push_back(e);
            owner.push_back(i);
        }
    std::vector<cplx> vals;
    for (const auto& e : spec.entries) vals.push_back(e.lambda);
    const auto ids = cluster_ids(vals, 1e-7 * 2.0 * b);
    std::vector<int> sizes(vals.size(), 0);
    for (auto id : ids) ++sizes[id];
    for (std::size_t i = 0; i < vals.size(); ++i) {
        spec.entries[i].cluster = ids[i];
        spec.entries[i].multiplicity = sizes[ids[i]];
    }
    // Eigenvectors inside a cluster are ill-conditioned; use the backward
    // error sigma_min(H - mean) once per (block, cluster) instead.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < spec.entries.size(); ++i)
        if (spec.entries[i].multiplicity > 1) groups[{owner[i], spec.entries[i].cluster}].push_back(i);
    std::vector<std::vector<std::size_t>> group_list;
    for (auto& [key, members] : groups) group_list.push_back(std::move(members));
    parallel_for(group_list.size(), [&](std::size_t g) {
        const auto& members = group_list[g];
        cplx mean = 0.0;
        for (auto i : members) mean += spec.entries[i].lambda;
        mean /= double(members.size());
        const ComplexMatrix& h = hb.blocks[owner[members.front()]].H;
        const double norm = h.frobenius_norm();
        ComplexMatrix shifted = h;
        for (std::size_t d = 0; d < h.rows(); ++d) shifted(d, d) -= mean;
        const auto sv = singular_values(shifted);
        const double smin = sv.empty() ? 0.0 : sv.back();
        for (auto i : members) spec.entries[i].residual = norm > 0 ? smin / norm : smin;
    });
    return spec;
}

double zero_threshold(double v_sup) { return std::max(1e-10, 1e-8 * v_sup); }

ComplexSpectrum cluster_near_level(const ComplexSpectrum& spec, int q, double r0) {
    if (!(r0 > 0)) throw DomainError("perturbed", "r0 must be > 0");
    if (r0 >= 2.0 * spec.b) throw DomainError("perturbed", "r0 must stay below the Landau gap 2b");
    if (q < 0 || q > spec.q_max) throw ParameterError("perturbed", "level q outside the truncation");
    ComplexSpectrum out = spec;
    out.level_q = q;
    out.entries.clear();
    const double level = landau_level(q, spec.b);
    const double zero = zero_threshold(spec.v_sup);
    for (auto e : spec.entries) {
        e.k = level - e.lambda;
        const double a = std::abs(e.k);
        if (a > zero && a < r0) out.entries.push_back(e);
    }
    return out;
}

ComplexSpectrum annulus_entries(const ComplexSpectrum& spec, double r, double r0) {
    ComplexSpectrum out = spec;
    out.entries.clear();
    for (const auto& e : spec.entries) {
        const double a = std::abs(e.k);
        if (a > r && a < r0) out.entries.push_back(e);
    }
    return out;
}

void SectorSpec::validate(std::optional<double> b) const {
    if (sign_J != 1 && sign_J != -1) throw ParameterError("perturbed", "sector sign_J must be +1 or -1");
    if (!(delta > 0)) throw ParameterError("perturbed", "sector delta must be > 0");
    if (!(r > 0) || !(r < r0)) throw ParameterError("perturbed", "sector needs 0 < r < r0");
    if (b && !(r0 < 2.0 * *b)) throw ParameterError("perturbed", "sector r0 must be < 2b");
}

bool sector_test(cplx k, const SectorSpec& sec) {
    const cplx z = -double(sec.sign_J) * k * std::polar(1.0, -sec.alpha);
    return z.real() >= sec.r && z.real() <= sec.r0 && std::abs(z.imag()) <= sec.delta * z.real();
}

std::size_t annulus_count(const ComplexSpectrum& spec, int q, double r, double r0) {
    if (!(r > 0) || !(r < r0)) throw DomainError("perturbed", "annulus_count needs 0 < r < r0");
    const double level = landau_level(q, spec.b);
    std::size_t n = 0;
    for (const auto& e : spec.entries) {
        const double a = std::abs(level - e.lambda);
        if (a > r && a < r0) ++n;
    }
    return n;
}

LocalizationReport localization_report(const ComplexSpectrum& spec, const SectorSpec& sec) {
    LocalizationReport rep;
    for (const auto& e : spec.entries) {
        if (sector_test(e.k, sec))
            ++rep.inside;
        else
            ++rep.outside;
        const cplx z = -double(sec.sign_J) * e.k * std::polar(1.0, -sec.alpha);
        rep.worst_angle = std::max(rep.worst_angle, std::abs(std::arg(z)));
    }
    return rep;
}

}  // namespace speclab
