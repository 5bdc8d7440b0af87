#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speclab/landau_basis.hpp"
#include "speclab/potential.hpp"

namespace speclab {

struct AnalysisConfig {
    int level_q = 1;
    double r = 0;   // inner radius of the annulus / sector
    double r0 = 0;  // outer radius
    double delta = 0.5;
    double p = 2.0;  // moment exponent
    std::vector<double> r_grid;
    int contour_nodes = 64;
    int grid_density = 40;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv", "json", "svg"};

    bool wants(const std::string& fmt) const;
};

struct RunConfig {
    LandauConfig landau;
    PotentialSpec potential;
    AnalysisConfig analysis;
    OutputConfig output;
    double tol = kDefaultTol;
    std::string canonical;  // normalized JSON of the input document
    std::uint64_t hash = 0; // FNV-1a of `canonical`
};

/// Parses and validates a JSON run configuration. Errors name the JSON
/// path and the line:column of the offending key in `text`.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string hash_hex(std::uint64_t h);

}  // namespace speclab
