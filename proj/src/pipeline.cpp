#include "speclab/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>
#include <map>

#include <Eigen/Core>
#include <json.hpp>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"

namespace speclab {

using json = nlohmann::json;

namespace {

std::string fmt(double x) { return format_double(x); }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

// NaN and infinities are not valid JSON numbers.
json num(double x) {
    if (std::isfinite(x)) return x;
    return fmt(x);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void add(RunReport& rep, std::string name, bool passed, std::string detail) {
    rep.checks.push_back({std::move(name), passed, std::move(detail)});
}

CountingFunction level_counting(const RunConfig& cfg) {
    const Profile& prof = cfg.potential.profile;
    if (is_radial(prof)) return toeplitz_eigs_radial(cfg.analysis.level_q, prof, cfg.landau);
    return toeplitz_eigs_general(cfg.analysis.level_q, prof, cfg.landau);
}

void spectrum_checks(RunReport& rep, const HamiltonianBlocks& hb, const RunConfig& cfg) {
    const double tol = cfg.tol;
    const double cluster_tol = 1e-7 * 2.0 * cfg.landau.b;

    double worst_simple = 0, worst_cluster = 0;
    for (const auto& e : rep.spectrum.entries) {
        double& w = e.multiplicity > 1 ? worst_cluster : worst_simple;
        w = std::max(w, e.residual);
    }
    add(rep, "residual", worst_simple <= tol && worst_cluster <= cluster_tol + tol,
        "max simple " + fmt(worst_simple) + ", max clustered " + fmt(worst_cluster));

    // Bendixson: each eigenvalue of a block lies in the rectangle spanned by
    // the spectra of its Hermitian and skew-Hermitian parts.
    std::map<std::pair<bool, int>, std::array<double, 4>> boxes;
    for (const auto& blk : hb.blocks) {
        const ComplexMatrix re = (blk.H + blk.H.adjoint()) * cplx(0.5);
        const ComplexMatrix im = (blk.H - blk.H.adjoint()) * cplx(0, -0.5);
        const auto er = eig_hermitian(re).values;
        const auto ei = eig_hermitian(im).values;
        const double slack = 1e-9 * std::max(1.0, blk.H.frobenius_norm());
        boxes[{blk.full, blk.full ? 0 : blk.m}] = {er.front().real() - slack, er.back().real() + slack, ei.front().real() - slack,
                                    ei.back().real() + slack};
    }
    std::size_t bad = 0;
    for (const auto& e : rep.spectrum.entries) {
        const auto& bx = boxes.at({e.full_block, e.full_block ? 0 : e.block_m});
        if (e.lambda.real() < bx[0] || e.lambda.real() > bx[1] || e.lambda.imag() < bx[2] ||
            e.lambda.imag() > bx[3])
            ++bad;
    }
    add(rep, "bendixson", bad == 0, std::to_string(bad) + " eigenvalues outside their block rectangle");

    if (cfg.potential.alpha == 0.0) {
        std::size_t wrong = 0;
        double worst_im = 0;
        for (const auto& e : rep.cluster.entries) {
            worst_im = std::max(worst_im, std::abs(e.lambda.imag()));
            if (!(-double(cfg.potential.sign_J) * e.k.real() > 0)) ++wrong;
        }
        add(rep, "sign_law", wrong == 0 && worst_im <= 1e-10,
            std::to_string(wrong) + " cluster values on the wrong side, max |Im| " + fmt(worst_im));
    }

    const auto& an = cfg.analysis;
    // the annulus meets the cone |Im z| <= delta Re z only where Re z > r / sqrt(1 + delta^2)
    SectorSpec sec{cfg.potential.alpha, cfg.potential.sign_J, an.delta, an.r / std::sqrt(1.0 + an.delta * an.delta),
                   an.r0};
    rep.localization = localization_report(rep.cluster, sec);
    add(rep, "localization", rep.localization.outside == 0,
        std::to_string(rep.localization.inside) + " inside, " + std::to_string(rep.localization.outside) +
            " outside, worst angle " + fmt(rep.localization.worst_angle));
    if (cfg.potential.alpha == 0.0) {
        SectorSpec thin = sec;
        thin.delta = 1e-6;
        thin.r = an.r / std::sqrt(1.0 + thin.delta * thin.delta);
        const auto lr = localization_report(rep.cluster, thin);
        add(rep, "localization_hermitian", lr.outside == 0,
            std::to_string(lr.outside) + " outside the delta = 1e-6 sector");
    }
}

void charval_checks(RunReport& rep) {
    const double tol = 1e-7;
    const auto& ce = rep.cluster.entries;
    std::size_t weighted = 0;
    std::size_t mismatched = 0;
    for (const auto& cv : rep.charvals.values) {
        weighted += static_cast<std::size_t>(cv.multiplicity);
        std::size_t near = 0;
        int cluster_mult = 0;
        for (const auto& e : ce) {
            if (std::abs(e.k - cv.k) <= tol) {
                ++near;
                cluster_mult = e.multiplicity;
            }
        }
        if (near != static_cast<std::size_t>(cv.multiplicity) || cluster_mult != cv.multiplicity) ++mismatched;
        rep.index.push_back({cv.k, cv.multiplicity, cluster_mult});
    }
    std::size_t unmatched = 0;
    for (const auto& e : ce) {
        const bool hit = std::any_of(rep.charvals.values.begin(), rep.charvals.values.end(),
                                     [&](const CharacteristicValue& cv) { return std::abs(e.k - cv.k) <= tol; });
        if (!hit) ++unmatched;
    }
    add(rep, "characteristic_values", weighted == ce.size() && mismatched == 0 && unmatched == 0,
        std::to_string(weighted) + " by index vs " + std::to_string(ce.size()) + " eigenvalues, " +
            std::to_string(mismatched) + " multiplicity mismatches, " + std::to_string(unmatched) + " unmatched");
    add(rep, "annulus_index", rep.charvals.annulus_index == static_cast<int>(ce.size()),
        "boundary index " + std::to_string(rep.charvals.annulus_index) + " vs count " + std::to_string(ce.size()));
    add(rep, "resolved", rep.charvals.unresolved.empty(),
        std::to_string(rep.charvals.unresolved.size()) + " unresolved cells");
}

std::string file_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

json report_json(const RunReport& rep, const RunConfig& cfg) {
    json j;
    j["config_hash"] = hash_hex(cfg.hash);
    j["config"] = json::parse(cfg.canonical);
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    j["ok"] = rep.ok();
    j["spectrum"] = {{"file", file_name(rep.spectrum_path)},
                     {"size", rep.spectrum.entries.size()},
                     {"cluster_size", rep.cluster.entries.size()}};
    j["localization"] = {{"inside", rep.localization.inside},
                         {"outside", rep.localization.outside},
                         {"worst_angle", num(rep.localization.worst_angle)}};
    j["counting"] = {{"file", file_name(rep.counting_path)}, {"rows", rep.counting.size()}};
    json cvs = json::array();
    for (const auto& cv : rep.charvals.values)
        cvs.push_back({{"k", cplx_json(cv.k)}, {"multiplicity", cv.multiplicity}, {"circle_radius", cv.circle_radius}});
    j["characteristic_values"] = {{"file", file_name(rep.index_path)},
                                  {"values", cvs},
                                  {"annulus_index", rep.charvals.annulus_index},
                                  {"unresolved", rep.charvals.unresolved.size()}};
    const auto& m = rep.moments;
    j["moments"] = {{"p", m.p},
                    {"global_sum", num(m.global_sum)},
                    {"local_sum", num(m.local_sum)},
                    {"integral_form", num(m.integral_form)},
                    {"boundary_term", num(m.boundary_term)},
                    {"ratio", num(m.ratio)},
                    {"identity_residual", num(m.identity_residual)},
                    {"mu_sum", num(m.mu_sum)},
                    {"mu_integral_form", num(m.mu_integral_form)},
                    {"delta", num(m.delta)},
                    {"sandwich_holds", m.sandwich_holds},
                    {"outside", m.outside},
                    {"counted", m.counted},
                    {"toeplitz_integral", num(m.toeplitz_integral)}};
    j["split"] = {{"reconstruction_error", num(rep.split.reconstruction_error)},
                  {"derivative_error", num(rep.split.derivative_error)},
                  {"spectral_identity_error", num(rep.split.spectral_identity_error)},
                  {"passed", rep.split.passed}};
    j["assumption"] = {{"smallest_singular_value", num(rep.assumption.smallest_singular_value)},
                           {"invertible", rep.assumption.invertible},
                           {"kernel_dim", rep.assumption.kernel_dim},
                           {"kernel_threshold", rep.assumption.kernel_threshold}};
    return j;
}

}  // namespace

bool RunReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RunReport run_pipeline(const RunConfig& cfg, unsigned stages) {
    const auto& an = cfg.analysis;
    const int q = an.level_q;
    RunReport rep;

    const HamiltonianBlocks hb = build_hamiltonian(cfg.landau, cfg.potential);
    rep.spectrum = discrete_spectrum(hb, q, cfg.tol);
    rep.cluster = annulus_entries(cluster_near_level(rep.spectrum, q, an.r0), an.r, an.r0);
    spectrum_checks(rep, hb, cfg);

    const SectorSpec sector{cfg.potential.alpha, cfg.potential.sign_J, an.delta, an.r, an.r0};
    const std::string dir = cfg.output.directory;
    const bool csv = cfg.output.wants("csv");
    if (csv || cfg.output.wants("json") || cfg.output.wants("svg")) ensure_directory(dir);
    auto out_path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    auto emit = [&](std::string& slot, const char* name, const std::string& text) {
        slot = out_path(name);
        write_text_file(slot, text);
        rep.written.push_back(slot);
    };

    if ((stages & kStageSpectrum) && csv) emit(rep.spectrum_path, "spectrum.csv", spectrum_csv(spectrum_rows(rep.spectrum, sector)));

    const bool need_counting = stages & (kStageCounting | kStageMoments);
    if (need_counting) rep.toeplitz = level_counting(cfg);
    if (stages & kStageCounting) {
        const DecayClass cls = decay_class(cfg.potential.profile);
        const ModelParams params = model_params(cfg.potential.profile, cfg.landau.b);
        for (double r : an.r_grid) {
            CountingRow row;
            row.r = r;
            row.log_r = std::log(r);
            row.N_toeplitz = counting_query(rep.toeplitz, r);
            row.N_annulus = annulus_count(rep.spectrum, q, r, an.r0);
            row.phi_model = std::numeric_limits<double>::quiet_NaN();
            if (cls != DecayClass::none && row.log_r < -1.0) row.phi_model = model_phi_log(cls, params, row.log_r);
            row.ratio = row.phi_model > 0 ? double(row.N_toeplitz) / row.phi_model
                                          : std::numeric_limits<double>::quiet_NaN();
            rep.counting.push_back(row);
        }
        if (csv) emit(rep.counting_path, "counting.csv", counting_csv(rep.counting));
    }

    const bool need_bs = stages & (kStageCharvals | kStageReport);
    BSContext ctx;
    if (need_bs) ctx = make_bs_context(hb);

    if (stages & kStageReport) {
        double worst = 0;
        for (const auto& e : rep.cluster.entries)
            worst = std::max(worst, bs_check(e.lambda, q, ctx, cfg.potential.schatten_p).min_dist_to_minus_one);
        add(rep, "birman_schwinger", worst < 1e-8, "max over cluster of min |1 + mu(T)| = " + fmt(worst));

        const cplx k_mid = -double(cfg.potential.sign_J) * std::polar(std::sqrt(an.r * an.r0), cfg.potential.alpha) *
                           std::polar(1.0, 0.1);
        try {
            rep.split = singular_split_check(weighted_resolvent(k_mid, q, ctx, true), ctx);
            add(rep, "split", rep.split.passed,
                "derivative " + fmt(rep.split.derivative_error) + ", identity " +
                    fmt(rep.split.spectral_identity_error));
        } catch (const ConsistencyError& e) {
            add(rep, "split", false, e.what());
        }
        rep.assumption = assumption_check(q, ctx);
    }

    if (stages & kStageCharvals) {
        rep.charvals = characteristic_values(an.r, an.r0, q, ctx, an.grid_density, an.contour_nodes);
        charval_checks(rep);
        if (csv) emit(rep.index_path, "index.csv", index_csv(rep.index));
    }

    if (stages & kStageMoments) {
        rep.moments = lt_local_comparison(rep.cluster, rep.toeplitz, an.p, an.r, an.r0, cfg.potential.alpha,
                                          cfg.potential.sign_J);
        add(rep, "lt_identity", rep.moments.identity_residual <= 1e-12,
            "residual " + fmt(rep.moments.identity_residual));
        add(rep, "lt_sandwich", rep.moments.sandwich_holds, "delta " + fmt(rep.moments.delta));
    }

    if ((stages & kStagePlot) && cfg.output.wants("svg")) {
        std::vector<cplx> ks;
        for (const auto& e : cluster_near_level(rep.spectrum, q, an.r0).entries) ks.push_back(e.k);
        emit(rep.plot_path, "kplane.svg", kplane_svg(ks, sector, q));
    }

    if ((stages & kStageReport) && cfg.output.wants("json")) {
        emit(rep.report_path, "report.json", report_json(rep, cfg).dump(2) + "\n");
        json prov;
        prov["config_hash"] = hash_hex(cfg.hash);
        prov["version"] = kVersion;
        prov["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
        prov["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH);
        prov["threads"] = thread_count();
        prov["finished_utc"] = utc_now();
        emit(rep.provenance_path, "provenance.json", prov.dump(2) + "\n");
    }
    return rep;
}

}  // namespace speclab
