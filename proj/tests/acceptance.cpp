// Acceptance checks. Run with no argument for all of them, or with the
// number of a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "speclab/birman_schwinger.hpp"
#include "speclab/config.hpp"
#include "speclab/errors.hpp"
#include "speclab/io.hpp"
#include "speclab/lieb_thirring.hpp"
#include "speclab/parallel.hpp"
#include "speclab/perturbed.hpp"
#include "speclab/pipeline.hpp"
#include "speclab/toeplitz.hpp"

using namespace speclab;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ln P(a, x) from the defining series x^a e^{-x} / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k)).
double log_p_series(double a, double x) {
    long double term = 1, sum = 1;
    for (int k = 1; k < 10000; ++k) {
        term *= (long double)x / (a + k);
        sum += term;
        if (term < 1e-30L * sum) break;
    }
    return double(a * std::log((long double)x) - x - std::lgamma((long double)a + 1) + std::log(sum));
}

PotentialSpec power_potential(double alpha) {
    PowerDecay pd;
    pd.u0.constant = 5.0;
    pd.m = 4.0;
    return PotentialSpec{alpha, -1, 2.0, pd};
}

const LandauConfig kSectorCfg{1.0, 5, 60};

struct SectorRun {
    HamiltonianBlocks hb;
    ComplexSpectrum spectrum;
    ComplexSpectrum cluster;
};

SectorRun sector_run(double alpha) {
    SectorRun run;
    run.hb = build_hamiltonian(kSectorCfg, power_potential(alpha));
    run.spectrum = discrete_spectrum(run.hb, 1);
    run.cluster = annulus_entries(cluster_near_level(run.spectrum, 1, 0.3), 0.01, 0.3);
    return run;
}

Outcome c1() {
    const auto t0 = std::chrono::steady_clock::now();
    const LandauConfig cfg{1.0, 5, 60};
    const auto spec = discrete_spectrum(build_hamiltonian(cfg, PotentialSpec{0.0, -1, 2.0, ConstantProfile{0.0}}));
    const double t = seconds_since(t0);
    double worst = 0;
    std::vector<int> per_level(cfg.q_max + 1, 0);
    for (const auto& e : spec.entries) {
        const int q = std::clamp(int(std::lround(e.lambda.real() / (2 * cfg.b))), 0, cfg.q_max);
        worst = std::max(worst, std::abs(e.lambda - 2.0 * cfg.b * q));
        ++per_level[q];
    }
    const bool levels_ok = std::all_of(per_level.begin(), per_level.end(), [&](int n) { return n == cfg.j_max + 1; });
    return {worst <= 1e-12 * 2 * cfg.b * cfg.q_max && levels_ok && t < 1.0,
            "max deviation " + num(worst) + ", " + std::to_string(spec.entries.size()) + " eigenvalues, " + num(t) + " s"};
}

Outcome c2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cf = toeplitz_eigs_radial(0, Disk{1.0, 1.0}, LandauConfig{2.0, 0, 200});
    const double t = seconds_since(t0);
    double worst = 0;
    for (int j = 0; j <= 200; ++j) {
        const double oracle = log_p_series(j + 1, 1.0);
        worst = std::max(worst, std::abs(cf.log_values[j] - oracle) / std::abs(oracle));
    }
    return {worst <= 1e-8 && t < 10.0, "max relative log error " + num(worst) + ", " + num(t) + " s"};
}

Outcome c3() {
    const auto t0 = std::chrono::steady_clock::now();
    const Disk disk{1.0, 1.0};
    const double b = 0.1;
    const auto cf = toeplitz_eigs_radial(0, disk, LandauConfig{b, 0, 400});
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(-100.0 - 10.0 * i);
    const auto fit = asymptotic_fit(cf, DecayClass::A3, model_params(disk, b), grid);
    const double t = seconds_since(t0);
    double lo = 1e300, hi = 0;
    for (const auto& row : fit.rows) {
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    const double first = fit.rows.front().ratio, last = fit.rows.back().ratio;
    const bool ok = fit.rows.size() == grid.size() && lo >= 0.6 && hi <= 1.5 &&
                    std::abs(last - 1.0) < std::abs(first - 1.0) && t < 10.0;
    return {ok, "ratio range [" + num(lo) + ", " + num(hi) + "], at 100: " + num(first) + ", at 400: " + num(last) +
                    ", " + num(t) + " s"};
}

Outcome c4() {
    const auto t0 = std::chrono::steady_clock::now();
    PowerDecay pd;
    pd.u0.constant = 4e-3;
    pd.m = 2.0;
    const LandauConfig cfg{1.0, 0, 4000};
    const auto cf = toeplitz_eigs_radial(0, pd, cfg);
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(std::log(1e-6) + i * (std::log(1e-3) - std::log(1e-6)) / 19);
    const auto fit = asymptotic_fit(cf, DecayClass::A1, model_params(pd, cfg.b), grid);
    const double t = seconds_since(t0);
    return {fit.dropped == 0 && std::abs(fit.slope - 1.0) <= 0.1 && t < 120.0,
            "slope " + num(fit.slope) + " (target 1), " + num(t) + " s"};
}

Outcome c5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (double alpha : {0.0, kPi / 4, kPi / 2}) {
        const auto run = sector_run(alpha);
        double worst = 0, worst_im = 0;
        for (const auto& e : run.cluster.entries) {
            worst = std::max(worst, std::abs(std::arg(e.k * std::polar(1.0, -alpha))));
            worst_im = std::max(worst_im, std::abs(e.lambda.imag()));
        }
        ok = ok && !run.cluster.entries.empty() && worst <= 0.3;
        if (alpha == 0.0) ok = ok && worst_im <= 1e-10;
        detail += "alpha " + num(alpha) + ": " + std::to_string(run.cluster.entries.size()) + " values, worst angle " +
                  num(worst) + (alpha == 0.0 ? ", max |Im| " + num(worst_im) : std::string()) + "; ";
    }
    const double t = seconds_since(t0);
    return {ok && t < 120.0, detail + num(t) + " s"};
}

Outcome c6() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto run = sector_run(kPi / 4);
    const auto ctx = make_bs_context(run.hb);
    double worst = 0;
    for (const auto& e : run.cluster.entries)
        worst = std::max(worst, bs_check(e.lambda, 1, ctx, 2.0).min_dist_to_minus_one);
    const auto cv = characteristic_values(0.01, 0.3, 1, ctx);
    int weighted = 0;
    for (const auto& v : cv.values) weighted += v.multiplicity;
    // pair every eigenvalue with its nearest characteristic value
    double far = 0;
    std::vector<int> used(cv.values.size(), 0);
    for (const auto& e : run.cluster.entries) {
        double best = 1e300;
        std::size_t bi = 0;
        for (std::size_t i = 0; i < cv.values.size(); ++i) {
            const double d = std::abs(cv.values[i].k - e.k);
            if (d < best) {
                best = d;
                bi = i;
            }
        }
        if (!cv.values.empty()) ++used[bi];
        far = std::max(far, best);
    }
    bool mult_ok = true;
    for (std::size_t i = 0; i < cv.values.size(); ++i) mult_ok = mult_ok && used[i] == cv.values[i].multiplicity;
    const double t = seconds_since(t0);
    const bool ok = !run.cluster.entries.empty() && worst < 1e-8 && weighted == int(run.cluster.entries.size()) &&
                    far <= 1e-7 && mult_ok && t < 300.0;
    return {ok, "max min|1+mu| " + num(worst) + ", " + std::to_string(weighted) + " by index vs " +
                    std::to_string(run.cluster.entries.size()) + " eigenvalues, max offset " + num(far) + ", " +
                    num(t) + " s"};
}

Outcome c7() {
    auto winding = [](const std::function<cplx(cplx)>& f, cplx c, double r) {
        return index_contour(f, ContourSpec{c, r, 64});
    };
    const bool scalar = winding([](cplx k) { return k - 0.1; }, 0.0, 0.2) == 1 &&
                        winding([](cplx k) { return (k - 0.1) * (k - 0.1); }, 0.0, 0.2) == 2 &&
                        winding([](cplx k) { return k - 0.1; }, cplx(0.5, 0.5), 0.2) == 0;

    const auto run = sector_run(kPi / 4);
    const auto ctx = make_bs_context(run.hb);
    const auto cv = characteristic_values(0.01, 0.3, 1, ctx);
    auto det = [&](cplx k) { return full_det(ctx, 1, k); };
    int mismatches = 0;
    for (const auto& v : cv.values) {
        int cluster_mult = 0;
        for (const auto& e : run.cluster.entries)
            if (std::abs(e.k - v.k) <= 1e-7) cluster_mult = e.multiplicity;
        if (winding(det, v.k, 1e-3) != cluster_mult) ++mismatches;
    }
    const int boundary = cv.annulus_index;
    const bool ok = scalar && !cv.values.empty() && mismatches == 0 && boundary == int(run.cluster.entries.size());
    return {ok, std::string("scalar windings ") + (scalar ? "ok" : "wrong") + ", " + std::to_string(cv.values.size()) +
                    " values with " + std::to_string(mismatches) + " index mismatches at radius 1e-3, boundary index " +
                    std::to_string(boundary) + " vs count " + std::to_string(run.cluster.entries.size())};
}

Outcome c8() {
    const auto t0 = std::chrono::steady_clock::now();
    const double height = 0.2, r0 = 0.6;
    const LandauConfig cfg{1.0, 5, 60};
    const PotentialSpec pot{0.0, -1, 2.0, Disk{1.0, height}};
    const auto spec = discrete_spectrum(build_hamiltonian(cfg, pot), 1);
    const auto cf = toeplitz_eigs_radial(1, pot.profile, cfg);
    long worst = 0;
    std::string rows;
    for (int i = 0; i < 10; ++i) {
        const double r = height * 1e-6 * std::pow(1e5, i / 9.0);
        const long a = long(annulus_count(spec, 1, r, r0)), n = long(counting_query(cf, r));
        worst = std::max(worst, std::labs(a - n));
        rows += std::to_string(a) + "/" + std::to_string(n) + " ";
    }
    const double t = seconds_since(t0);
    return {worst <= 2 && t < 120.0, "annulus/toeplitz counts " + rows + "max gap " + std::to_string(worst) + ", " +
                                         num(t) + " s"};
}

Outcome c9() {
    bool ok = true;
    double worst_identity = 0;
    for (double alpha : {0.0, kPi / 4, kPi / 2}) {
        const auto run = sector_run(alpha);
        for (double p : {2.0, 3.0, 4.0}) {
            const auto rep = lt_local_comparison(run.cluster, CountingFunction{}, p, 0.01, 0.3, alpha, -1);
            worst_identity = std::max(worst_identity, rep.identity_residual);
            ok = ok && rep.sandwich_holds && rep.identity_residual <= 1e-12;
        }
    }
    {
        const PotentialSpec disk{kPi / 4, -1, 2.0, Disk{1.0, 0.2}};
        const auto spec = discrete_spectrum(build_hamiltonian(kSectorCfg, disk), 1);
        const auto cl = annulus_entries(cluster_near_level(spec, 1, 0.6), 0.02, 0.6);
        const auto rep = lt_local_comparison(cl, CountingFunction{}, 2.0, 0.02, 0.6, disk.alpha, -1);
        worst_identity = std::max(worst_identity, rep.identity_residual);
        ok = ok && rep.sandwich_holds && rep.identity_residual <= 1e-12;
    }

    const auto run = sector_run(kPi / 4);
    ComplexSpectrum near = run.spectrum;
    near.entries.clear();
    for (const auto& e : run.spectrum.entries) {
        double dist = 1e300;
        for (int q = 0; q <= near.q_max; ++q) dist = std::min(dist, std::abs(e.lambda - 2.0 * near.b * q));
        if (dist < 1.0) near.entries.push_back(e);
    }
    std::string sums;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double p : {2.0, 2.5, 3.0, 3.5, 4.0}) {
        const double s = lt_global_sum(near, near.b, near.q_max, p);
        monotone = monotone && std::isfinite(s) && s < prev;
        prev = s;
        sums += num(s) + " ";
    }
    return {ok && monotone && !near.entries.empty(),
            "max identity residual " + num(worst_identity) + ", sandwich " + (ok ? "holds" : "fails") +
                ", global sums p=2..4: " + sums};
}

Outcome c10() {
    const auto cfg =
        parse_config(R"({"landau": {"b": 1}, "potential": {"profile": {"type": "disk", "R": 1, "height": 0.2}},
                         "output": {"formats": []}})");
    const auto rep = run_pipeline(cfg, kStageReport);
    const auto ctx = make_bs_context(build_hamiltonian(cfg.landau, cfg.potential));
    const auto phases = degenerate_phases(cfg.analysis.level_q, ctx);
    if (phases.empty()) return {false, "no degenerate phase found"};
    const auto bad = assumption_check(cfg.analysis.level_q, ctx, phases.front());
    return {rep.assumption.invertible && !bad.invertible,
            "default run smallest singular value " + num(rep.assumption.smallest_singular_value) +
                ", degenerate phase " + num(phases.front().real()) + (std::signbit(phases.front().imag()) ? "" : "+") +
                num(phases.front().imag()) + "i gives " + num(bad.smallest_singular_value)};
}

Outcome c11() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "speclab_acceptance_11";
    fs::remove_all(root);
    const std::vector<std::string> bodies = {
        R"("landau": {"b": 1}, "potential": {"alpha": 0.7853981633974483, "profile": {"type": "power", "u0": 5, "m": 4}},
           "analysis": {"r": 0.01, "r0": 0.3})",
        R"("landau": {"b": 1}, "potential": {"alpha": 0.7853981633974483, "profile": {"type": "disk", "R": 1, "height": 0.2}})"};
    int differences = 0, files = 0;
    for (std::size_t c = 0; c < bodies.size(); ++c) {
        std::vector<std::string> dirs;
        for (unsigned threads : {1u, 1u, 8u}) {
            const std::string dir = (root / (std::to_string(c) + "_" + std::to_string(dirs.size()))).string();
            set_thread_count(threads);
            run_pipeline(parse_config("{" + bodies[c] + R"(, "output": {"directory": ")" + dir + "\"}}"));
            dirs.push_back(dir);
        }
        for (const char* f : {"spectrum.csv", "counting.csv", "index.csv"}) {
            const std::string ref = read_text_file(dirs[0] + "/" + f);
            for (std::size_t i = 1; i < dirs.size(); ++i) {
                ++files;
                if (read_text_file(dirs[i] + "/" + f) != ref) ++differences;
            }
        }
    }
    set_thread_count(1);
    return {differences == 0, std::to_string(files) + " CSV comparisons (threads 1, 1, 8), " +
                                  std::to_string(differences) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > int(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
            return 2;
        }
        which.push_back(n);
    } else {
        for (int i = 1; i <= int(criteria.size()); ++i) which.push_back(i);
    }
    int failed = 0;
    for (int n : which) {
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("criterion %2d %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
