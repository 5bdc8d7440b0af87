#include "speclab/landau_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"
#include "speclab/quadrature.hpp"

namespace speclab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-11;
constexpr double kCancelTol = 1e-13;
constexpr int kMinNodes = 64;
constexpr int kMaxNodes = 4096;
constexpr int kPanels = 8;
constexpr int kGradedLevels = 24;
constexpr double kWindowMargin = 120.0;

// One quadrature estimate: the signed value and ln(sum |terms|), the scale
// below which cancellation makes further digits meaningless.
struct Estimate {
    SignedLog value;
    double log_abs_sum = kNegInf;
};

// Accumulates sign * exp(log_term) without overflow.
class LogAccumulator {
public:
    void add(int sign, double log_term) {
        if (sign == 0 || log_term == kNegInf) return;
        signs_.push_back(sign);
        logs_.push_back(log_term);
    }
    Estimate finish() const {
        if (logs_.empty()) return {};
        const double top = *std::max_element(logs_.begin(), logs_.end());
        double s = 0.0, a = 0.0;
        for (std::size_t i = 0; i < logs_.size(); ++i) {
            const double e = std::exp(logs_[i] - top);
            s += signs_[i] * e;
            a += e;
        }
        Estimate est;
        est.log_abs_sum = top + std::log(a);
        if (s != 0.0) est.value = {s > 0 ? 1 : -1, top + std::log(std::abs(s))};
        return est;
    }

private:
    std::vector<int> signs_;
    std::vector<double> logs_;
};

bool converged(const Estimate& prev, const Estimate& cur) {
    const double top = std::max(prev.log_abs_sum, cur.log_abs_sum);
    if (top == kNegInf) return true;
    const double p = prev.value.sign * std::exp(prev.value.log_abs - top);
    const double c = cur.value.sign * std::exp(cur.value.log_abs - top);
    const double diff = std::abs(c - p);
    return diff <= kRelTol * std::abs(c) || diff <= kCancelTol * std::exp(cur.log_abs_sum - top);
}

double log_norm(RadialIndex r) { return 0.5 * (std::lgamma(r.n + 1.0) - std::lgamma(r.n + r.a + 1.0)); }

double log_profile_xi(const Profile& p, double b, double xi) {
    return log_radial_value(p, std::sqrt(2.0 * xi / b));
}

// Gauss-Laguerre with weight xi^alpha e^-xi, doubling the node count.
SignedLog integrate_laguerre(RadialIndex l, RadialIndex r, const Profile& p, double b) {
    const double alpha = 0.5 * (l.a + r.a);
    const double lnorm = log_norm(l) + log_norm(r);
    Estimate prev;
    for (int n = kMinNodes; n <= kMaxNodes; n *= 2) {
        const auto rule = gauss_laguerre(alpha, n);
        LogAccumulator acc;
        for (int k = 0; k < n; ++k) {
            const double x = rule->nodes[k];
            const SignedLog f = laguerre_log(l.n, l.a, x) * laguerre_log(r.n, r.a, x);
            acc.add(f.sign, rule->log_weights[k] + log_profile_xi(p, b, x) + f.log_abs + lnorm);
        }
        Estimate cur = acc.finish();
        if (n > kMinNodes && converged(prev, cur)) return cur.value;
        if (n * 2 > kMaxNodes)
            throw AccuracyError("Gauss-Laguerre radial integral did not converge at " + std::to_string(n) + " nodes",
                                prev.value.value(), cur.value.value());
        prev = cur;
    }
    return {};
}

// Window [lo, hi] in xi outside which the envelope xi^alpha e^-xi U is
// below exp(-kWindowMargin) of its peak.
bool envelope_window(const Profile& p, double b, double alpha, double xi_end, double& lo, double& hi) {
    auto g = [&](double xi) {
        if (xi == 0.0) return alpha == 0.0 ? log_profile_xi(p, b, 0.0) : kNegInf;
        return alpha * std::log(xi) - xi + log_profile_xi(p, b, xi);
    };
    std::vector<double> xs, gs;
    if (alpha == 0.0) {
        xs.push_back(0.0);
        gs.push_back(g(0.0));
    }
    double xi = std::min(1e-6, std::isfinite(xi_end) ? 1e-3 * xi_end : 1e-6);
    double gmax = kNegInf, xmax = 0.0;
    for (double v : gs)
        if (v > gmax) gmax = v;
    for (;;) {
        const double x = std::min(xi, xi_end);
        const double v = g(x);
        xs.push_back(x);
        gs.push_back(v);
        if (v > gmax) {
            gmax = v;
            xmax = x;
        }
        if (x >= xi_end) break;
        if (x > xmax && x > alpha + 1.0 && v < gmax - kWindowMargin) break;
        xi *= 1.05;
    }
    if (gmax == kNegInf) return false;
    const double cut = gmax - kWindowMargin;
    std::size_t first = 0;
    while (gs[first] < cut) ++first;
    lo = first == 0 ? xs[0] : xs[first - 1];
    if (first == 0 || (alpha == 0.0 && first == 1)) lo = 0.0;
    std::size_t last = xs.size() - 1;
    while (last > first && gs[last - 1] < cut) --last;
    hi = xs[last];
    return hi > lo;
}

// Composite Gauss-Legendre over the envelope window, split at profile knots.
SignedLog integrate_windowed(RadialIndex l, RadialIndex r, const Profile& p, double b) {
    const double alpha = 0.5 * (l.a + r.a);
    const double lnorm = log_norm(l) + log_norm(r);
    const auto support = support_radius(p);
    const double xi_end = support ? 0.5 * b * (*support) * (*support) : std::numeric_limits<double>::infinity();
    double lo = 0, hi = 0;
    if (!envelope_window(p, b, alpha, xi_end, lo, hi)) return {};
    std::vector<double> cuts;
    for (int i = 0; i <= kPanels; ++i) cuts.push_back(lo + (hi - lo) * i / kPanels);
    // geometric grading toward the origin
    if (lo == 0.0)
        for (int k = 1; k <= kGradedLevels; ++k) cuts.push_back(std::ldexp(hi / kPanels, -k));
    if (const auto* t = std::get_if<RadialTable>(&p))
        for (double rk : t->r) {
            const double x = 0.5 * b * rk * rk;
            if (x > lo && x < hi) cuts.push_back(x);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Estimate prev;
    const int min_per_panel = kMinNodes / kPanels;
    const int max_per_panel = kMaxNodes / kPanels;
    for (int n = min_per_panel; n <= max_per_panel; n *= 2) {
        const auto rule = gauss_legendre(n);
        LogAccumulator acc;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
            const double half = 0.5 * (cuts[c + 1] - cuts[c]);
            if (half <= 0) continue;
            for (int k = 0; k < n; ++k) {
                const double x = mid + half * rule->nodes[k];
                if (x <= 0) continue;
                const SignedLog f = laguerre_log(l.n, l.a, x) * laguerre_log(r.n, r.a, x);
                const double lu = log_profile_xi(p, b, x);
                acc.add(f.sign, std::log(half) + rule->log_weights[k] + alpha * std::log(x) - x + lu + f.log_abs + lnorm);
            }
        }
        Estimate cur = acc.finish();
        if (n > min_per_panel && converged(prev, cur)) return cur.value;
        if (n * 2 > max_per_panel)
            throw AccuracyError("windowed radial integral did not converge at " + std::to_string(n * kPanels) + " nodes",
                                prev.value.value(), cur.value.value());
        prev = cur;
    }
    return {};
}

double two_pi() { return 2.0 * std::numbers::pi; }

}  // namespace

void LandauConfig::validate() const {
    if (!(b > 0) || !std::isfinite(b)) throw ParameterError("landau-basis", "b must be > 0");
    if (q_max < 0) throw ParameterError("landau-basis", "q_max must be >= 0");
    if (j_max < q_max) throw ParameterError("landau-basis", "j_max must be >= q_max");
}

double landau_level(int q, double b) {
    if (!(b > 0)) throw DomainError("landau-basis", "landau_level needs b > 0");
    if (q < 0) throw DomainError("landau-basis", "landau_level needs q >= 0");
    return 2.0 * b * q;
}

RadialIndex radial_index(int q, int j) { return {std::min(q, j), std::abs(j - q)}; }

SignedLog radial_basis_log(const BasisIndex& idx, double b, double r) {
    if (r < 0) throw DomainError("landau-basis", "eval_basis needs r >= 0");
    const RadialIndex ri = radial_index(idx.q, idx.j);
    const double xi = 0.5 * b * r * r;
    if (xi == 0.0 && ri.a > 0) return {};
    const SignedLog lag = laguerre_log(ri.n, ri.a, xi);
    if (lag.is_zero()) return {};
    const double la = ri.a > 0 ? 0.5 * ri.a * std::log(xi) : 0.0;
    return {lag.sign, 0.5 * std::log(b / two_pi()) + log_norm(ri) + la + lag.log_abs - 0.5 * xi};
}

cplx eval_basis(const BasisIndex& idx, const LandauConfig& cfg, double r, double theta) {
    if (idx.q < 0 || idx.j < 0 || idx.q > cfg.q_max || idx.j > cfg.j_max)
        throw ParameterError("landau-basis", "basis index outside the truncation");
    const SignedLog rad = radial_basis_log(idx, cfg.b, r);
    return std::polar(rad.value(), idx.m() * theta);
}

SignedLog radial_integral_log(RadialIndex left, RadialIndex right, const Profile& profile, double b) {
    if (std::holds_alternative<Grid2D>(profile))
        throw DomainError("landau-basis", "Grid2D has no radial matrix elements; use galerkin_matrix");
    if (const auto* d = std::get_if<Disk>(&profile); d && left.n == 0 && right.n == 0 && left.a == right.a) {
        const double x = 0.5 * b * d->R * d->R;
        return {1, std::log(d->height) + log_gamma_p(left.a + 1.0, x)};
    }
    if (std::holds_alternative<PowerDecay>(profile) || std::holds_alternative<ConstantProfile>(profile))
        return integrate_laguerre(left, right, profile, b);
    return integrate_windowed(left, right, profile, b);
}

SignedLog radial_matrix_element_log(int q, int qp, int j, const Profile& profile, const LandauConfig& cfg) {
    const int jp = j - q + qp;
    if (q < 0 || qp < 0 || q > cfg.q_max || qp > cfg.q_max || j < 0 || j > cfg.j_max || jp < 0 || jp > cfg.j_max)
        throw ParameterError("landau-basis", "matrix element indices outside the truncation");
    return radial_integral_log(radial_index(q, j), radial_index(qp, jp), profile, cfg.b);
}

double radial_matrix_element(int q, int qp, int j, const Profile& profile, const LandauConfig& cfg) {
    return radial_matrix_element_log(q, qp, j, profile, cfg).value();
}

std::vector<BasisIndex> full_basis(const LandauConfig& cfg) {
    std::vector<BasisIndex> out;
    for (int q = 0; q <= cfg.q_max; ++q)
        for (int j = 0; j <= cfg.j_max; ++j) out.push_back({q, j});
    return out;
}

namespace {

// Polar quadrature of <phi_a, U phi_b> for Cartesian samples: Gauss-Legendre
// panels in r, trapezoid (exact for trigonometric polynomials) in theta.
ComplexMatrix grid_galerkin_once(const std::vector<BasisIndex>& basis, const Grid2D& g, double b, int n_r,
                                 int n_theta) {
    const double r_max = g.max_radius();
    const int panels = 16;
    const int per_panel = std::max(1, n_r / panels);
    const auto rule = gauss_legendre(per_panel);
    int m_lo = 0, m_hi = 0;
    for (const auto& bi : basis) {
        m_lo = std::min(m_lo, bi.m());
        m_hi = std::max(m_hi, bi.m());
    }
    const int d_max = m_hi - m_lo;
    const std::size_t nb = basis.size();
    std::vector<double> cs(n_theta), sn(n_theta);
    for (int k = 0; k < n_theta; ++k) {
        cs[k] = std::cos(two_pi() * k / n_theta);
        sn[k] = std::sin(two_pi() * k / n_theta);
    }
    const std::size_t n_nodes = static_cast<std::size_t>(panels) * per_panel;
    // per ring: weight * r, radial values of every basis function, Fourier coefficients
    std::vector<double> ring_w(n_nodes);
    std::vector<double> radial(n_nodes * nb);
    std::vector<cplx> coeff(n_nodes * (2 * d_max + 1));
    parallel_for(n_nodes, [&](std::size_t i) {
        const std::size_t pnl = i / per_panel;
        const std::size_t k = i % per_panel;
        const double a = r_max * pnl / panels, c = r_max * (pnl + 1) / panels;
        const double r = 0.5 * (a + c) + 0.5 * (c - a) * rule->nodes[k];
        ring_w[i] = 0.5 * (c - a) * rule->weights[k] * r;
        for (std::size_t t = 0; t < nb; ++t) radial[i * nb + t] = radial_basis_log(basis[t], b, r).value();
        std::vector<double> u(n_theta);
        for (int s = 0; s < n_theta; ++s) u[s] = g(r * cs[s], r * sn[s]);
        for (int d = -d_max; d <= d_max; ++d) {
            cplx acc = 0.0;
            for (int s = 0; s < n_theta; ++s) {
                const long idx = ((static_cast<long>(d) * s) % n_theta + n_theta) % n_theta;
                acc += u[s] * cplx(cs[idx], sn[idx]);
            }
            coeff[i * (2 * d_max + 1) + (d + d_max)] = acc * (two_pi() / n_theta);
        }
    });
    ComplexMatrix out(nb, nb);
    parallel_for(nb, [&](std::size_t a) {
        for (std::size_t c = a; c < nb; ++c) {
            const int d = basis[c].m() - basis[a].m();
            cplx acc = 0.0;
            for (std::size_t i = 0; i < n_nodes; ++i)
                acc += ring_w[i] * radial[i * nb + a] * radial[i * nb + c] * coeff[i * (2 * d_max + 1) + (d + d_max)];
            out(a, c) = acc;
        }
    });
    for (std::size_t a = 0; a < nb; ++a) {
        out(a, a) = out(a, a).real();
        for (std::size_t c = a + 1; c < nb; ++c) out(c, a) = std::conj(out(a, c));
    }
    return out;
}

ComplexMatrix grid_galerkin(const std::vector<BasisIndex>& basis, const Grid2D& g, double b) {
    int m_lo = 0, m_hi = 0;
    for (const auto& bi : basis) {
        m_lo = std::min(m_lo, bi.m());
        m_hi = std::max(m_hi, bi.m());
    }
    int n_theta = 256;
    while (n_theta < 4 * (m_hi - m_lo) + 16) n_theta *= 2;
    int n_r = 256;
    ComplexMatrix prev = grid_galerkin_once(basis, g, b, n_r, n_theta);
    for (int it = 0; it < 3; ++it) {
        n_r *= 2;
        n_theta *= 2;
        ComplexMatrix cur = grid_galerkin_once(basis, g, b, n_r, n_theta);
        const double diff = (cur - prev).max_abs();
        if (diff <= 1e-9 * std::max(cur.max_abs(), 1e-300)) return cur;
        prev = std::move(cur);
        if (it == 2)
            throw AccuracyError("polar quadrature of the Grid2D Galerkin matrix did not converge", diff, prev.max_abs());
    }
    return prev;
}

}  // namespace

ComplexMatrix galerkin_matrix(const std::vector<BasisIndex>& basis, const Profile& profile, const LandauConfig& cfg) {
    if (const auto* g = std::get_if<Grid2D>(&profile)) return grid_galerkin(basis, *g, cfg.b);
    const std::size_t nb = basis.size();
    ComplexMatrix out(nb, nb);
    const AngularProfile* u0 = is_separable(profile) ? angular_part(profile) : nullptr;
    parallel_for(nb, [&](std::size_t a) {
        for (std::size_t c = a; c < nb; ++c) {
            const int d = basis[c].m() - basis[a].m();
            cplx factor = 1.0;
            if (u0) {
                factor = u0->fourier(d);
                if (std::abs(factor) == 0.0) continue;
            } else if (d != 0) {
                continue;
            }
            const SignedLog v = radial_integral_log(radial_index(basis[a].q, basis[a].j),
                                                    radial_index(basis[c].q, basis[c].j), profile, cfg.b);
            out(a, c) = factor * v.value();
        }
    });
    for (std::size_t a = 0; a < nb; ++a) {
        out(a, a) = out(a, a).real();
        for (std::size_t c = a + 1; c < nb; ++c) out(c, a) = std::conj(out(a, c));
    }
    return out;
}

BasisDiagnostics basis_diagnostics(const LandauConfig& cfg, int q_limit, int m_limit) {
    cfg.validate();
    q_limit = std::min(q_limit, cfg.q_max);
    BasisDiagnostics out;
    const double b = cfg.b;
    std::vector<BasisIndex> funcs;
    for (int q = 0; q <= q_limit; ++q)
        for (int m = -m_limit; m <= m_limit; ++m) {
            const int j = q + m;
            if (j >= 0 && j <= cfg.j_max) funcs.push_back({q, j});
        }
    out.functions_checked = static_cast<int>(funcs.size());

    // Orthonormality: 2 pi * int R_a R_b r dr over a generous radial range.
    const auto rule = gauss_legendre(64);
    const int panels = 32;
    double top_xi = 0;
    for (const auto& f : funcs) top_xi = std::max(top_xi, double(std::max(f.q, f.j)));
    const double r_max = std::sqrt(2.0 * (2.0 * top_xi + 80.0 + 10.0 * std::sqrt(top_xi + 1.0)) / b);
    for (std::size_t x = 0; x < funcs.size(); ++x)
        for (std::size_t y = x; y < funcs.size(); ++y) {
            if (funcs[x].m() != funcs[y].m()) continue;
            double acc = 0.0;
            for (int p = 0; p < panels; ++p) {
                const double a = r_max * p / panels, c = r_max * (p + 1) / panels;
                for (int k = 0; k < 64; ++k) {
                    const double r = 0.5 * (a + c) + 0.5 * (c - a) * rule->nodes[k];
                    acc += 0.5 * (c - a) * rule->weights[k] * r * radial_basis_log(funcs[x], b, r).value() *
                           radial_basis_log(funcs[y], b, r).value();
                }
            }
            acc *= two_pi();
            const double expect = x == y ? 1.0 : 0.0;
            out.orthonormality_defect = std::max(out.orthonormality_defect, std::abs(acc - expect));
        }

    // Eigenrelation: -Lap f - i b x2 d1 f + i b x1 d2 f + b^2 |x|^2/4 f - b f.
    const double h = 1e-2 / std::sqrt(b);
    static constexpr double c1[] = {0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
    static constexpr double c2[] = {-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
    for (const auto& f : funcs) {
        auto phi = [&](double x1, double x2) { return eval_basis(f, cfg, std::hypot(x1, x2), std::atan2(x2, x1)); };
        const double lam = landau_level(f.q, b);
        const double r_top = std::sqrt(2.0 * (2.0 * std::max(f.q, f.j) + 30.0) / b);
        double fmax = 0;
        std::vector<double> rs;
        for (int i = 1; i <= 200; ++i) rs.push_back(r_top * i / 200.0);
        for (double r : rs) fmax = std::max(fmax, std::abs(radial_basis_log(f, b, r).value()));
        for (double r : rs) {
            if (std::abs(radial_basis_log(f, b, r).value()) <= 0.1 * fmax) continue;
            for (double th : {0.3, 1.7, 4.0}) {
                const double x1 = r * std::cos(th), x2 = r * std::sin(th);
                const cplx f0 = phi(x1, x2);
                cplx d1 = 0, d2 = 0, d11 = c2[0] * f0, d22 = c2[0] * f0;
                for (int s = 1; s <= 3; ++s) {
                    const cplx xp = phi(x1 + s * h, x2), xm = phi(x1 - s * h, x2);
                    const cplx yp = phi(x1, x2 + s * h), ym = phi(x1, x2 - s * h);
                    d1 += c1[s] * (xp - xm);
                    d2 += c1[s] * (yp - ym);
                    d11 += c2[s] * (xp + xm);
                    d22 += c2[s] * (yp + ym);
                }
                d1 /= h;
                d2 /= h;
                d11 /= h * h;
                d22 /= h * h;
                const cplx i{0.0, 1.0};
                const cplx hf = -(d11 + d22) - i * b * x2 * d1 + i * b * x1 * d2 +
                                0.25 * b * b * (x1 * x1 + x2 * x2) * f0 - b * f0;
                const double rel = std::abs(hf - lam * f0) / ((lam + b) * std::abs(f0));
                out.eigen_defect = std::max(out.eigen_defect, rel);
            }
        }
    }
    return out;
}

}  // namespace speclab
