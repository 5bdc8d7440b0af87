#pragma once

#include <string>
#include <vector>

#include "speclab/birman_schwinger.hpp"
#include "speclab/config.hpp"
#include "speclab/io.hpp"
#include "speclab/lieb_thirring.hpp"
#include "speclab/perturbed.hpp"
#include "speclab/toeplitz.hpp"

namespace speclab {

inline constexpr const char* kVersion = "0.1.0";

enum Stage : unsigned {
    kStageSpectrum = 1u,
    kStageCounting = 2u,
    kStageCharvals = 4u,
    kStageMoments = 8u,
    kStagePlot = 16u,
    kStageReport = 32u,  // report.json, provenance.json and the checks that need BS machinery
    kStageAll = 63u,
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct RunReport {
    std::vector<CheckResult> checks;

    std::vector<std::string> written;  // every file produced, in write order
    std::string spectrum_path;
    std::string counting_path;
    std::string index_path;
    std::string report_path;
    std::string provenance_path;
    std::string plot_path;

    ComplexSpectrum spectrum;  // every eigenvalue, k measured from level_q
    ComplexSpectrum cluster;   // r < |k| < r0
    LocalizationReport localization;
    CountingFunction toeplitz;
    std::vector<CountingRow> counting;
    CharacteristicResult charvals;
    std::vector<IndexRow> index;
    MomentReport moments;
    SplitReport split;
    AssumptionReport assumption;

    bool ok() const;
};

/// Runs the selected stages (the spectrum is always computed), evaluates the
/// invariant checks that belong to them and writes the requested outputs
/// under cfg.output.directory.
RunReport run_pipeline(const RunConfig& cfg, unsigned stages = kStageAll);

}  // namespace speclab
