#include "speclab/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"

namespace speclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxContourNodes = 65536;

// G diag(d) G
ComplexMatrix sandwich(const ComplexMatrix& g, const std::vector<cplx>& d) {
    const std::size_t n = g.rows();
    ComplexMatrix gd(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) gd(i, l) = g(i, l) * d[l];
    return gd * g;
}

std::vector<cplx> resolvent_diag(const BSBlock& blk, int q, double b, cplx k) {
    const cplx lambda = landau_level(q, b) - k;
    std::vector<cplx> d(blk.levels.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const cplx gap = blk.levels[i] - lambda;
        if (std::abs(gap) <= 1e-14 * (1.0 + std::abs(lambda)))
            throw PoleError("spectral parameter on a retained Landau level", blk.level_index[i]);
        d[i] = 1.0 / gap;
    }
    return d;
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& parts) {
    std::size_t n = 0;
    for (const auto& p : parts) n += p.rows();
    ComplexMatrix out(n, n);
    std::size_t off = 0;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < p.rows(); ++i)
            for (std::size_t j = 0; j < p.cols(); ++j) out(off + i, off + j) = p(i, j);
        off += p.rows();
    }
    return out;
}

ComplexMatrix identity_plus(const ComplexMatrix& t) {
    ComplexMatrix a = t;
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 1.0;
    return a;
}

// G P_q G for one block.
ComplexMatrix singular_core(const BSBlock& blk, int q) {
    std::vector<cplx> d(blk.levels.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (blk.level_index[i] == q) d[i] = 1.0;
    return sandwich(blk.G, d);
}

// f'/f for f = det(I + T): tr((I + T)^{-1} T').
cplx log_derivative(const BSBlock& blk, cplx phase, int q, double b, cplx k) {
    const ComplexMatrix a = identity_plus(block_resolvent(blk, phase, q, b, k));
    const ComplexMatrix x = solve(a, block_resolvent_derivative(blk, phase, q, b, k));
    return x.trace();
}

}  // namespace

void ContourSpec::validate() const {
    if (!(radius > 0)) throw ParameterError("birman-schwinger", "contour radius must be > 0");
    if (nodes < 16 || (nodes & (nodes - 1)) != 0)
        throw ParameterError("birman-schwinger", "contour nodes must be a power of two >= 16");
}

BSContext make_bs_context(const HamiltonianBlocks& hb) {
    BSContext ctx;
    ctx.cfg = hb.cfg;
    ctx.alpha = hb.alpha;
    ctx.sign_J = hb.sign_J;
    ctx.phase = hb.phase;
    ctx.v_sup = hb.v_sup;
    ctx.blocks.resize(hb.blocks.size());
    parallel_for(hb.blocks.size(), [&](std::size_t i) {
        const auto& src = hb.blocks[i];
        auto& dst = ctx.blocks[i];
        dst.full = src.full;
        dst.m = src.m;
        dst.levels = src.levels;
        for (const auto& bi : src.basis) dst.level_index.push_back(bi.q);
        dst.G = hermitian_sqrt(src.V);
    });
    return ctx;
}

ComplexMatrix block_resolvent(const BSBlock& blk, cplx phase, int q, double b, cplx k) {
    return phase * sandwich(blk.G, resolvent_diag(blk, q, b, k));
}

ComplexMatrix block_resolvent_derivative(const BSBlock& blk, cplx phase, int q, double b, cplx k) {
    auto d = resolvent_diag(blk, q, b, k);
    for (auto& x : d) x = -x * x;
    return phase * sandwich(blk.G, d);
}

BSOperator weighted_resolvent(cplx k, int q, const BSContext& ctx, bool with_split) {
    if (q < 0 || q > ctx.cfg.q_max) throw ParameterError("birman-schwinger", "level q outside the truncation");
    const double b = ctx.cfg.b;
    BSOperator op;
    op.k = k;
    op.level_q = q;
    std::vector<ComplexMatrix> full, sing, reg;
    for (const auto& blk : ctx.blocks) {
        full.push_back(block_resolvent(blk, ctx.phase, q, b, k));
        if (!with_split) continue;
        std::vector<cplx> ds(blk.levels.size(), 0.0), dr(blk.levels.size(), 0.0);
        for (std::size_t i = 0; i < blk.levels.size(); ++i) {
            if (blk.level_index[i] == q)
                ds[i] = 1.0 / k;
            else
                dr[i] = 1.0 / (blk.levels[i] - landau_level(q, b) + k);
        }
        sing.push_back(ctx.phase * sandwich(blk.G, ds));
        reg.push_back(ctx.phase * sandwich(blk.G, dr));
    }
    op.matrix = block_diagonal(full);
    if (with_split) op.split = BSSplit{block_diagonal(sing), block_diagonal(reg)};
    return op;
}

BSOperator weighted_resolvent(cplx k, int q, const LandauConfig& cfg, const PotentialSpec& pot, bool with_split) {
    return weighted_resolvent(k, q, make_bs_context(build_hamiltonian(cfg, pot)), with_split);
}

double schatten_norm(const ComplexMatrix& m, double p) {
    if (!(p >= 1)) throw ParameterError("birman-schwinger", "Schatten exponent must be >= 1");
    double s = 0;
    for (double sv : singular_values(m)) s += std::pow(sv, p);
    return std::pow(s, 1.0 / p);
}

SplitReport singular_split_check(const BSOperator& op, const BSContext& ctx) {
    if (!op.split) throw ConsistencyError("birman-schwinger", "operator carries no singular/regular split");
    SplitReport rep;
    const double norm = std::max(op.matrix.frobenius_norm(), 1e-300);
    rep.reconstruction_error = (op.split->singular + op.split->regular - op.matrix).frobenius_norm() / norm;
    if (rep.reconstruction_error > 1e-12)
        throw ConsistencyError("birman-schwinger",
                               "singular + regular does not reproduce T (rel. error " +
                                   std::to_string(rep.reconstruction_error) + ")");
    const int q = op.level_q;
    const double b = ctx.cfg.b;
    const cplx k = op.k;
    const double h = 1e-4 * std::abs(k);
    for (const auto& blk : ctx.blocks) {
        auto regular_at = [&](cplx kk) {
            std::vector<cplx> dr(blk.levels.size(), 0.0);
            for (std::size_t i = 0; i < dr.size(); ++i)
                if (blk.level_index[i] != q) dr[i] = 1.0 / (blk.levels[i] - landau_level(q, b) + kk);
            return dr;
        };
        const auto dp = regular_at(k + h), dm = regular_at(k - h), d0 = regular_at(k);
        std::vector<cplx> fd(d0.size()), an(d0.size());
        for (std::size_t i = 0; i < d0.size(); ++i) {
            fd[i] = (dp[i] - dm[i]) / (2.0 * h);
            an[i] = -d0[i] * d0[i];
        }
        const ComplexMatrix a = ctx.phase * sandwich(blk.G, an);
        const ComplexMatrix f = ctx.phase * sandwich(blk.G, fd);
        const double scale = std::max(a.frobenius_norm(), 1e-300);
        if (a.frobenius_norm() > 0) rep.derivative_error = std::max(rep.derivative_error, (f - a).frobenius_norm() / scale);

        // Nonzero spectrum of G P_q G against the level-q compression of V = G^2.
        const ComplexMatrix core = singular_core(blk, q);
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < blk.level_index.size(); ++i)
            if (blk.level_index[i] == q) rows.push_back(i);
        if (rows.empty()) continue;
        const ComplexMatrix v = blk.G * blk.G;
        ComplexMatrix comp(rows.size(), rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j) comp(i, j) = v(rows[i], rows[j]);
        auto ev_core = eig_hermitian(core, 1e-8).values;
        auto ev_comp = eig_hermitian(comp, 1e-8).values;
        // compare the top rows.size() eigenvalues of the core with the compression
        std::vector<double> a1, a2;
        for (auto& x : ev_core) a1.push_back(x.real());
        for (auto& x : ev_comp) a2.push_back(x.real());
        std::sort(a1.rbegin(), a1.rend());
        std::sort(a2.rbegin(), a2.rend());
        for (std::size_t i = 0; i < a2.size(); ++i)
            rep.spectral_identity_error = std::max(rep.spectral_identity_error, std::abs(a1[i] - a2[i]));
        for (std::size_t i = a2.size(); i < a1.size(); ++i)
            rep.spectral_identity_error = std::max(rep.spectral_identity_error, std::abs(a1[i]));
    }
    rep.passed = rep.derivative_error <= 1e-6 && rep.spectral_identity_error <= 1e-9;
    return rep;
}

CutoffReport cutoff_split_check(const BSContext& ctx, int q, double s) {
    if (!(s > 0)) throw ParameterError("birman-schwinger", "cutoff s must be > 0");
    CutoffReport rep;
    rep.s = s;
    for (const auto& blk : ctx.blocks) {
        const ComplexMatrix core = singular_core(blk, q);
        if (core.rows() == 0) continue;
        const EigenResult er = eig_hermitian(core, 1e-8);
        const ComplexMatrix& vec = *er.vectors;
        const std::size_t n = core.rows();
        ComplexMatrix big(n, n), small(n, n);
        for (std::size_t c = 0; c < n; ++c) {
            const double mu = er.values[c].real();
            ComplexMatrix& dst = mu > 0.5 * s ? big : small;
            if (mu > 0.5 * s)
                ++rep.rank_big;
            else
                rep.norm_small = std::max(rep.norm_small, std::abs(mu));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) dst(i, j) += mu * vec(i, c) * std::conj(vec(j, c));
        }
        const double scale = std::max(core.frobenius_norm(), 1e-300);
        rep.reconstruction_error = std::max(rep.reconstruction_error, (big + small - core).frobenius_norm() / scale);
    }
    return rep;
}

cplx regularized_det(const ComplexMatrix& K, double p) {
    if (!(p >= 1)) throw ParameterError("birman-schwinger", "regularized_det needs p >= 1");
    if (!K.square()) throw DimensionError("regularized_det: matrix must be square");
    const int order = static_cast<int>(std::ceil(p));
    const EigenResult er = eig_general(K, kDefaultTol, false);
    cplx prod = 1.0;
    for (const cplx& mu : er.values) {
        cplx corr = 0.0;
        cplx pw = 1.0;
        for (int k = 1; k < order; ++k) {
            pw *= -mu;
            corr += pw / double(k);
        }
        prod *= (1.0 + mu) * std::exp(corr);
    }
    return prod;
}

cplx block_det(const BSBlock& blk, cplx phase, int q, double b, cplx k) {
    return det_lu(identity_plus(block_resolvent(blk, phase, q, b, k)));
}

cplx full_det(const BSContext& ctx, int q, cplx k) {
    cplx d = 1.0;
    for (const auto& blk : ctx.blocks) d *= block_det(blk, ctx.phase, q, ctx.cfg.b, k);
    return d;
}

BSCheck bs_check(cplx lambda, int q, const BSContext& ctx, double p) {
    const cplx k = landau_level(q, ctx.cfg.b) - lambda;
    BSCheck out;
    out.min_dist_to_minus_one = std::numeric_limits<double>::infinity();
    out.det_value = 1.0;
    out.det_p_value = 1.0;
    for (const auto& blk : ctx.blocks) {
        const ComplexMatrix t = block_resolvent(blk, ctx.phase, q, ctx.cfg.b, k);
        for (const cplx& mu : eig_general(t, 1e-6, false).values)
            out.min_dist_to_minus_one = std::min(out.min_dist_to_minus_one, std::abs(1.0 + mu));
        out.det_value *= det_lu(identity_plus(t));
        out.det_p_value *= regularized_det(t, p);
    }
    return out;
}

int index_contour(const std::function<cplx(cplx)>& f, const ContourSpec& gamma, IndexDiagnostics* diag) {
    gamma.validate();
    std::vector<cplx> vals;
    auto point = [&](std::size_t j, std::size_t n) {
        return gamma.center + std::polar(gamma.radius, 2.0 * kPi * double(j) / double(n));
    };
    auto evaluate = [&](std::size_t n) {
        std::vector<cplx> next(n);
        if (vals.empty()) {
            parallel_for(n, [&](std::size_t j) { next[j] = f(point(j, n)); });
        } else {
            // even nodes are the previous ones
            for (std::size_t j = 0; j < vals.size(); ++j) next[2 * j] = vals[j];
            parallel_for(vals.size(), [&](std::size_t j) { next[2 * j + 1] = f(point(2 * j + 1, n)); });
        }
        vals = std::move(next);
    };
    auto winding = [&](double& max_step) {
        double total = 0;
        max_step = 0;
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (const cplx& v : vals) {
            lo = std::min(lo, std::abs(v));
            hi = std::max(hi, std::abs(v));
        }
        if (!(hi > 0) || !std::isfinite(hi) || lo <= 1e-13 * hi)
            throw ContourError("function (nearly) vanishes on the contour |k - (" + std::to_string(gamma.center.real()) +
                               "," + std::to_string(gamma.center.imag()) + ")| = " + std::to_string(gamma.radius));
        for (std::size_t j = 0; j < vals.size(); ++j) {
            const double step = std::arg(vals[(j + 1) % vals.size()] / vals[j]);
            total += step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (diag) {
            diag->min_abs = lo;
            diag->max_abs = hi;
        }
        return total / (2.0 * kPi);
    };
    std::size_t n = static_cast<std::size_t>(gamma.nodes);
    evaluate(n);
    double step = 0;
    double w_prev = winding(step);
    for (n *= 2; n <= static_cast<std::size_t>(kMaxContourNodes); n *= 2) {
        evaluate(n);
        const double w = winding(step);
        const long ip = std::lround(w_prev), ic = std::lround(w);
        if (ip == ic && std::abs(w - double(ic)) < 1e-3 && step < kPi / 4) {
            if (diag) {
                diag->nodes_used = static_cast<int>(n);
                diag->max_phase_step = step;
            }
            return static_cast<int>(ic);
        }
        w_prev = w;
    }
    throw ResolutionError("winding number did not stabilize by " + std::to_string(kMaxContourNodes) +
                          " nodes (last max phase step " + std::to_string(step) + ", last winding " +
                          std::to_string(w_prev) + ")");
}

namespace {

// Winding of f on |k| = radius, nudging the radius if the circle grazes a zero.
int circle_index(const std::function<cplx(cplx)>& f, cplx center, double radius, int nodes) {
    for (int attempt = 0;; ++attempt) {
        try {
            return index_contour(f, {center, radius * (1.0 + 1e-7 * attempt), nodes});
        } catch (const ContourError&) {
            if (attempt >= 5) throw;
        }
    }
}

struct BlockZeros {
    std::vector<std::pair<cplx, int>> zeros;  // (k, multiplicity)
    std::vector<double> radii;
    int index = 0;
    bool resolved = true;
    int found = 0;
};

BlockZeros block_zeros(const BSBlock& blk, cplx phase, int q, double b, double r, double r0, int grid,
                       int nodes) {
    BlockZeros out;
    auto f = [&](cplx k) { return block_det(blk, phase, q, b, k); };
    out.index = circle_index(f, 0.0, r0, nodes) - circle_index(f, 0.0, r, nodes);
    if (out.index <= 0) {
        out.resolved = out.index == 0;
        return out;
    }
    // poles at k = Lambda_q - Lambda_q' (k = 0 for q' = q)
    std::vector<cplx> poles;
    for (std::size_t i = 0; i < blk.levels.size(); ++i) poles.push_back(landau_level(q, b) - blk.levels[i]);

    std::vector<cplx> found;  // with repetition
    auto in_annulus = [&](cplx z) { return std::abs(z) > r && std::abs(z) < r0; };
    auto count_inside = [&] {
        int c = 0;
        for (auto z : found) c += in_annulus(z) ? 1 : 0;
        return c;
    };
    // Newton on f / prod (k - z_i), damped by |.| descent.
    auto newton = [&](cplx k) -> std::optional<cplx> {
        auto deflated_abs = [&](cplx kk) {
            double v = std::abs(f(kk));
            for (auto z : found) v /= std::abs(kk - z);
            return v;
        };
        double fk = deflated_abs(k);
        for (int it = 0; it < 200; ++it) {
            cplx ld;
            try {
                ld = log_derivative(blk, phase, q, b, k);
            } catch (const SingularityError&) {
                return k;
            } catch (const PoleError&) {
                return std::nullopt;
            }
            for (auto z : found) ld -= 1.0 / (k - z);
            if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag()) || std::abs(ld) == 0.0) return std::nullopt;
            cplx step = -1.0 / ld;
            const double cap = 0.25 * std::max(std::abs(k), r);
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            cplx next = k + step;
            double fn = deflated_abs(next);
            for (int h = 0; h < 40 && !(fn < fk); ++h) {
                step *= 0.5;
                next = k + step;
                fn = deflated_abs(next);
            }
            if (fn == 0.0) return next;
            const bool tiny = std::abs(step) < 1e-15 * std::max(std::abs(next), 1e-300);
            k = next;
            fk = fn;
            if (tiny || !(fn < std::numeric_limits<double>::infinity())) break;
            if (std::abs(k) < 1e-3 * r || std::abs(k) > 10.0 * r0) return std::nullopt;
        }
        // accept only if a plain Newton step from here is negligible
        try {
            cplx ld = log_derivative(blk, phase, q, b, k);
            for (auto z : found) ld -= 1.0 / (k - z);
            if (std::abs(1.0 / ld) < 1e-10 * std::abs(k)) return k;
        } catch (const SingularityError&) {
            return k;
        } catch (const Error&) {
        }
        return std::nullopt;
    };

    for (int level = 0; level < 4 && count_inside() < out.index; ++level) {
        const int g = grid << level;
        std::vector<double> mags(static_cast<std::size_t>(g) * g);
        auto node = [&](int i, int j) {
            const double rho = r + (r0 - r) * (i + 0.5) / g;
            return std::polar(rho, 2.0 * kPi * (j + 0.5) / g);
        };
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                double v = std::abs(f(node(i, j)));
                for (auto z : found) v /= std::abs(node(i, j) - z);
                mags[static_cast<std::size_t>(i) * g + j] = v;
            }
        std::vector<std::pair<double, cplx>> seeds;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                const double v = mags[static_cast<std::size_t>(i) * g + j];
                bool minimum = true;
                for (int di = -1; di <= 1 && minimum; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        const int ii = i + di;
                        if (ii < 0 || ii >= g) continue;
                        const int jj = (j + dj + g) % g;
                        if (mags[static_cast<std::size_t>(ii) * g + jj] < v) {
                            minimum = false;
                            break;
                        }
                    }
                if (minimum) seeds.push_back({v, node(i, j)});
            }
        for (auto z : found)
            for (int s = 0; s < 8; ++s) seeds.push_back({0.0, z + std::polar(1e-4 * std::abs(z), 2.0 * kPi * s / 8.0)});
        std::stable_sort(seeds.begin(), seeds.end(),
                         [](const auto& a, const auto& c) { return a.first < c.first; });
        for (const auto& [v, seed] : seeds) {
            if (count_inside() >= out.index) break;
            if (auto z = newton(seed)) found.push_back(*z);
        }
    }

    // Group repeated hits and assign each group its small-circle index.
    std::sort(found.begin(), found.end(), lex_less);
    std::vector<cplx> distinct;
    for (auto z : found)
        if (distinct.empty() || std::abs(z - distinct.back()) > 1e-7 * 2.0 * b) distinct.push_back(z);
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        const cplx z = distinct[i];
        if (!in_annulus(z)) continue;
        double rad = 1e-3;
        for (std::size_t j = 0; j < distinct.size(); ++j)
            if (j != i) rad = std::min(rad, 0.5 * std::abs(distinct[j] - z));
        for (auto p : poles) rad = std::min(rad, 0.5 * std::abs(p - z));
        int mult = 0;
        for (int attempt = 0; attempt < 12; ++attempt) {
            try {
                mult = index_contour(f, {z, rad, nodes});
                break;
            } catch (const ContourError&) {
                rad *= 0.5;
            }
        }
        if (mult > 0) {
            out.zeros.push_back({z, mult});
            out.radii.push_back(rad);
            out.found += mult;
        }
    }
    out.resolved = out.found == out.index;
    return out;
}

}  // namespace

CharacteristicResult characteristic_values(double r, double r0, int q, const BSContext& ctx, int grid,
                                           int contour_nodes) {
    if (!(r > 0) || !(r < r0)) throw DomainError("birman-schwinger", "characteristic_values needs 0 < r < r0");
    if (r0 >= 2.0 * ctx.cfg.b) throw DomainError("birman-schwinger", "annulus must stay below the Landau gap 2b");
    if (q < 0 || q > ctx.cfg.q_max) throw ParameterError("birman-schwinger", "level q outside the truncation");
    std::vector<BlockZeros> per(ctx.blocks.size());
    parallel_for(ctx.blocks.size(), [&](std::size_t i) {
        per[i] = block_zeros(ctx.blocks[i], ctx.phase, q, ctx.cfg.b, r, r0, grid, contour_nodes);
    });
    CharacteristicResult res;
    struct Hit {
        cplx k;
        int mult;
        double radius;
        int block;
    };
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < per.size(); ++i) {
        res.annulus_index += per[i].index;
        if (!per[i].resolved) res.unresolved.push_back({ctx.blocks[i].m, per[i].index, per[i].found});
        for (std::size_t z = 0; z < per[i].zeros.size(); ++z)
            hits.push_back({per[i].zeros[z].first, per[i].zeros[z].second, per[i].radii[z], ctx.blocks[i].m});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& c) { return lex_less(a.k, c.k); });
    const double merge = 1e-7 * 2.0 * ctx.cfg.b;
    for (const auto& h : hits) {
        if (!res.values.empty() && std::abs(res.values.back().k - h.k) <= merge) {
            auto& cv = res.values.back();
            cv.multiplicity += h.mult;
            cv.circle_radius = std::min(cv.circle_radius, h.radius);
            cv.blocks.push_back(h.block);
            continue;
        }
        res.values.push_back({h.k, h.mult, h.radius, {h.block}});
    }
    return res;
}

namespace {

struct AssumptionParts {
    ComplexMatrix a_prime;  // A'(0)
    ComplexMatrix pi;       // kernel projection
    std::size_t kernel_dim = 0;
};

AssumptionParts assumption_parts(const BSBlock& blk, int q, double b, int sign_J, double threshold) {
    const std::size_t n = blk.levels.size();
    std::vector<cplx> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (blk.level_index[i] != q) d[i] = 1.0 / (blk.levels[i] - landau_level(q, b));
    AssumptionParts parts;
    parts.a_prime = -double(sign_J) * sandwich(blk.G, d);
    const EigenResult er = eig_hermitian(singular_core(blk, q), 1e-8);
    parts.pi = ComplexMatrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        if (std::abs(er.values[c].real()) >= threshold) continue;
        ++parts.kernel_dim;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) parts.pi(i, j) += (*er.vectors)(i, c) * std::conj((*er.vectors)(j, c));
    }
    return parts;
}

}  // namespace

AssumptionReport assumption_check(int q, const BSContext& ctx, std::optional<cplx> eialpha_override) {
    if (q < 0 || q > ctx.cfg.q_max) throw ParameterError("birman-schwinger", "level q outside the truncation");
    AssumptionReport rep;
    const cplx e = eialpha_override ? *eialpha_override : std::polar(1.0, ctx.alpha);
    std::vector<double> smin(ctx.blocks.size(), 1.0);
    std::vector<std::size_t> kdim(ctx.blocks.size(), 0);
    parallel_for(ctx.blocks.size(), [&](std::size_t i) {
        const auto parts = assumption_parts(ctx.blocks[i], q, ctx.cfg.b, ctx.sign_J, rep.kernel_threshold);
        kdim[i] = parts.kernel_dim;
        const ComplexMatrix x = ComplexMatrix::identity(parts.pi.rows()) - e * (parts.a_prime * parts.pi);
        const auto sv = singular_values(x);
        smin[i] = sv.empty() ? 1.0 : sv.back();
    });
    for (std::size_t i = 0; i < smin.size(); ++i) {
        rep.smallest_singular_value = std::min(rep.smallest_singular_value, smin[i]);
        rep.kernel_dim += kdim[i];
    }
    rep.invertible = rep.smallest_singular_value > 1e-8;
    return rep;
}

std::vector<cplx> degenerate_phases(int q, const BSContext& ctx) {
    std::vector<cplx> out;
    for (const auto& blk : ctx.blocks) {
        const auto parts = assumption_parts(blk, q, ctx.cfg.b, ctx.sign_J, 1e-10);
        const ComplexMatrix ap = parts.a_prime * parts.pi;
        const double scale = std::max(ap.frobenius_norm(), 1e-300);
        for (const cplx& mu : eig_general(ap, 1e-6, false).values)
            if (std::abs(mu) > 1e-8 * scale && std::abs(mu) > 1e-12) out.push_back(1.0 / mu);
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace speclab
