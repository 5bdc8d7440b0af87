#include "speclab/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"

namespace speclab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double CountingFunction::log_floor() const { return log_values.empty() ? kNegInf : log_values.back(); }

CountingFunction make_counting_function(std::vector<double> log_values, int level_q, int j_max) {
    std::stable_sort(log_values.begin(), log_values.end(), std::greater<>());
    CountingFunction cf;
    cf.level_q = level_q;
    cf.j_max = j_max;
    cf.values.reserve(log_values.size());
    for (double l : log_values) cf.values.push_back(std::exp(l));
    cf.log_values = std::move(log_values);
    return cf;
}

CountingFunction toeplitz_eigs_radial(int q, const Profile& profile, const LandauConfig& cfg) {
    cfg.validate();
    if (!is_radial(profile)) throw DomainError("toeplitz", "toeplitz_eigs_radial needs a radial profile");
    if (q < 0 || q > cfg.q_max) throw ParameterError("toeplitz", "level q outside the truncation");
    std::vector<double> logs(static_cast<std::size_t>(cfg.j_max) + 1);
    parallel_for(logs.size(), [&](std::size_t j) {
        const SignedLog s = radial_matrix_element_log(q, q, static_cast<int>(j), profile, cfg);
        logs[j] = s.sign > 0 ? s.log_abs : kNegInf;
    });
    return make_counting_function(std::move(logs), q, cfg.j_max);
}

CountingFunction toeplitz_eigs_general(int q, const Profile& profile, const LandauConfig& cfg) {
    cfg.validate();
    if (q < 0 || q > cfg.q_max) throw ParameterError("toeplitz", "level q outside the truncation");
    std::vector<BasisIndex> basis;
    for (int j = 0; j <= cfg.j_max; ++j) basis.push_back({q, j});
    const ComplexMatrix m = galerkin_matrix(basis, profile, cfg);
    const EigenResult er = eig_hermitian(m, kDefaultTol);
    std::vector<double> logs;
    logs.reserve(er.values.size());
    for (const cplx& v : er.values) logs.push_back(v.real() > 0 ? std::log(v.real()) : kNegInf);
    return make_counting_function(std::move(logs), q, cfg.j_max);
}

std::size_t counting_query_log(const CountingFunction& cf, double log_r) {
    // first position whose value is not > log_r
    const auto it = std::partition_point(cf.log_values.begin(), cf.log_values.end(),
                                         [log_r](double l) { return l > log_r; });
    return static_cast<std::size_t>(it - cf.log_values.begin());
}

std::size_t counting_query(const CountingFunction& cf, double r) {
    if (!(r > 0)) throw DomainError("toeplitz", "counting_query needs r > 0");
    return counting_query_log(cf, std::log(r));
}

ModelParams model_params(const Profile& profile, double b) {
    ModelParams mp;
    mp.b = b;
    if (const auto* pd = std::get_if<PowerDecay>(&profile)) {
        mp.m = pd->m;
        mp.u0 = pd->u0;
    } else if (const auto* g = std::get_if<GaussianType>(&profile)) {
        mp.mu = g->mu;
        mp.beta = g->beta;
    } else if (const auto* t = std::get_if<RadialTable>(&profile)) {
        if (t->tail == TailKind::power) {
            mp.m = t->tail_m;
            mp.u0.constant = t->value.back() * std::pow(t->r.back(), t->tail_m);
        } else if (t->tail == TailKind::gaussian) {
            mp.mu = t->tail_mu;
            mp.beta = t->tail_beta;
        }
    }
    return mp;
}

double model_c_m(const ModelParams& params) {
    return params.b / (4.0 * std::numbers::pi) * params.u0.power_integral(2.0 / params.m);
}

double model_phi_log(DecayClass cls, const ModelParams& params, double log_r) {
    if (!(log_r < -1.0)) throw DomainError("toeplitz", "model_phi needs r in (0, 1/e)");
    if (!(params.b > 0)) throw ParameterError("toeplitz", "model_phi needs b > 0");
    const double L = -log_r;
    switch (cls) {
        case DecayClass::A1:
            if (!(params.m > 0)) throw ParameterError("toeplitz", "A1 needs m > 0");
            return model_c_m(params) * std::exp(-(2.0 / params.m) * log_r);
        case DecayClass::A2: {
            if (!(params.mu > 0)) throw ParameterError("toeplitz", "A2 needs mu > 0");
            if (!(params.beta > 0)) throw ParameterError("toeplitz", "A2 needs beta > 0");
            const double beta = params.beta;
            if (beta < 1.0) return 0.5 * params.b * std::pow(params.mu, -1.0 / beta) * std::pow(L, 1.0 / beta);
            if (beta == 1.0) return L / std::log1p(2.0 * params.mu / params.b);
            return beta / (beta - 1.0) * L / std::log(L);
        }
        case DecayClass::A3:
            return L / std::log(L);
        case DecayClass::none:
            break;
    }
    throw ParameterError("toeplitz", "no model law for a profile without decay");
}

double model_phi(DecayClass cls, const ModelParams& params, double r) {
    if (!(r > 0) || !(r < std::exp(-1.0))) throw DomainError("toeplitz", "model_phi needs r in (0, 1/e)");
    return model_phi_log(cls, params, std::log(r));
}

FitReport asymptotic_fit(const CountingFunction& cf, DecayClass cls, const ModelParams& params,
                         const std::vector<double>& log_r_grid) {
    FitReport rep;
    const bool flat = cf.size() == 0 || cf.log_values.front() - cf.log_values.back() < 1e-12;
    if (flat || cls == DecayClass::none) {
        rep.out_of_class = true;
        for (double lr : log_r_grid) {
            FitRow row;
            row.log_r = lr;
            row.N = counting_query_log(cf, lr);
            row.phi = std::numeric_limits<double>::quiet_NaN();
            row.ratio = std::numeric_limits<double>::quiet_NaN();
            rep.rows.push_back(row);
        }
        return rep;
    }
    const double floor = cf.log_floor();
    for (double lr : log_r_grid) {
        if (!(lr > floor)) {
            ++rep.dropped;
            continue;
        }
        FitRow row;
        row.log_r = lr;
        row.N = counting_query_log(cf, lr);
        row.phi = model_phi_log(cls, params, lr);
        row.ratio = double(row.N) / row.phi;
        rep.rows.push_back(row);
    }
    if (rep.rows.empty())
        throw RangeError("toeplitz", "no r grid point above the smallest retained eigenvalue");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& row : rep.rows) {
        if (row.N == 0) continue;
        const double x = -row.log_r, y = std::log(double(row.N));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double den = n * sxx - sx * sx;
    rep.slope = n >= 2 && den > 0 ? (n * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace speclab
