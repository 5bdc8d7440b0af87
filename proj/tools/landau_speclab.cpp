// landau-speclab: command-line driver.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "speclab/config.hpp"
#include "speclab/errors.hpp"
#include "speclab/landau_basis.hpp"
#include "speclab/parallel.hpp"
#include "speclab/pipeline.hpp"

namespace {

using namespace speclab;

void print_checks(const RunReport& rep) {
    for (const auto& c : rep.checks)
        std::printf("%-24s %s  %s\n", c.name.c_str(), c.passed ? "ok  " : "FAIL", c.detail.c_str());
    for (const auto& p : rep.written) std::printf("wrote %s\n", p.c_str());
}

int basis_check(const RunConfig& cfg) {
    const int q_limit = std::min(cfg.landau.q_max, 3);
    const int m_limit = std::min(cfg.landau.j_max, 8);
    const auto d = basis_diagnostics(cfg.landau, q_limit, m_limit);
    const bool ok = d.orthonormality_defect <= 1e-10 && d.eigen_defect <= 1e-6;
    std::printf("functions checked      %d\n", d.functions_checked);
    std::printf("orthonormality defect  %.3e\n", d.orthonormality_defect);
    std::printf("eigenrelation defect   %.3e\n", d.eigen_defect);
    std::printf("%s\n", ok ? "ok" : "FAIL");
    return ok ? 0 : 1;
}

void print_moments(const MomentReport& m) {
    std::printf("p                  %.17g\n", m.p);
    std::printf("global sum         %.17g\n", m.global_sum);
    std::printf("local sum          %.17g\n", m.local_sum);
    std::printf("integral form      %.17g\n", m.integral_form);
    std::printf("boundary term      %.17g\n", m.boundary_term);
    std::printf("identity residual  %.3e\n", m.identity_residual);
    std::printf("mu sum             %.17g\n", m.mu_sum);
    std::printf("delta              %.17g\n", m.delta);
    std::printf("sandwich           %s\n", m.sandwich_holds ? "holds" : "violated");
    std::printf("toeplitz integral  %.17g\n", m.toeplitz_integral);
    std::printf("counted %zu, outside %zu\n", m.counted, m.outside);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral laboratory for perturbed Landau Hamiltonians"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    std::optional<double> tol;
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--threads", threads, "worker threads (LANDAU_SPECLAB_THREADS wins)")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "eigenvalue residual tolerance")->check(CLI::PositiveNumber);

    auto* basis = app.add_subcommand("basis-check", "orthonormality and eigenrelation of the Landau basis");
    auto* toeplitz = app.add_subcommand("toeplitz", "Toeplitz counting table");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the truncated Hamiltonian");
    auto* charvals = app.add_subcommand("charvals", "characteristic values and their indices");
    auto* lt = app.add_subcommand("lt", "Lieb-Thirring moment report");
    auto* run = app.add_subcommand("run", "full pipeline with every check and output");
    auto* plot = app.add_subcommand("plot", "k-plane scatter with the sector overlay");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        if (out_dir) cfg.output.directory = *out_dir;
        if (tol) cfg.tol = *tol;
        if (threads) set_thread_count(*threads);

        if (basis->parsed()) return basis_check(cfg);

        unsigned stages = 0;
        if (toeplitz->parsed()) stages = kStageCounting;
        if (spectrum->parsed()) stages = kStageSpectrum;
        if (charvals->parsed()) stages = kStageCharvals;
        if (lt->parsed()) stages = kStageMoments;
        if (run->parsed()) stages = kStageAll;
        if (plot->parsed()) stages = kStagePlot;

        const RunReport rep = run_pipeline(cfg, stages);
        if (lt->parsed()) print_moments(rep.moments);
        print_checks(rep);
        return rep.ok() ? 0 : 1;
    } catch (const speclab::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", e.module().c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
