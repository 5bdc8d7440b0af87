#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "speclab/linalg.hpp"
#include "speclab/perturbed.hpp"

namespace speclab {

/// %.17g, so strtod gives back the same bits.
std::string format_double(double x);

struct SpectrumRow {
    int level_q = 0;
    bool full_block = false;
    int block_m = 0;
    cplx lambda;
    cplx k;
    int multiplicity = 1;
    double residual = 0;
    bool in_sector = false;

    bool operator==(const SpectrumRow&) const = default;
};

std::vector<SpectrumRow> spectrum_rows(const ComplexSpectrum& spec, const SectorSpec& sec);
std::string spectrum_csv(const std::vector<SpectrumRow>& rows);
/// Inverse of spectrum_csv. Throws IoError (path "<text>") on malformed input.
std::vector<SpectrumRow> parse_spectrum_csv(const std::string& text);

struct CountingRow {
    double r = 0;
    double log_r = 0;
    std::size_t N_toeplitz = 0;
    std::size_t N_annulus = 0;
    double phi_model = 0;
    double ratio = 0;
};
std::string counting_csv(const std::vector<CountingRow>& rows);

struct IndexRow {
    cplx k;
    int multiplicity_index = 0;
    int multiplicity_cluster = 0;
};
std::string index_csv(const std::vector<IndexRow>& rows);

/// k-plane scatter with the sector overlay drawn as the single polygon.
std::string kplane_svg(const std::vector<cplx>& ks, const SectorSpec& sec, int level_q);

/// Truncates and writes. IoError carries the path.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
/// Creates the directory (and parents); IoError if it cannot be made writable.
void ensure_directory(const std::string& path);

}  // namespace speclab
