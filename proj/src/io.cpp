#include "speclab/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw IoError("<text>", "bad number '" + s + "'");
    return v;
}

long parse_long(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) throw IoError("<text>", "bad integer '" + s + "'");
    return v;
}

const char* kSpectrumHeader = "level_q,block_m,lambda_re,lambda_im,k_re,k_im,multiplicity,residual,in_sector";

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<SpectrumRow> spectrum_rows(const ComplexSpectrum& spec, const SectorSpec& sec) {
    std::vector<SpectrumRow> rows;
    rows.reserve(spec.entries.size());
    for (const auto& e : spec.entries) {
        SpectrumRow r;
        r.level_q = spec.level_q;
        r.full_block = e.full_block;
        r.block_m = e.block_m;
        r.lambda = e.lambda;
        r.k = e.k;
        r.multiplicity = e.multiplicity;
        r.residual = e.residual;
        r.in_sector = sector_test(e.k, sec);
        rows.push_back(r);
    }
    return rows;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
    std::string out = std::string(kSpectrumHeader) + "\n";
    for (const auto& r : rows) {
        out += std::to_string(r.level_q) + "," + (r.full_block ? std::string("full") : std::to_string(r.block_m)) +
               "," + format_double(r.lambda.real()) + "," + format_double(r.lambda.imag()) + "," +
               format_double(r.k.real()) + "," + format_double(r.k.imag()) + "," + std::to_string(r.multiplicity) +
               "," + format_double(r.residual) + "," + (r.in_sector ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<SpectrumRow> parse_spectrum_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || split(line, ',') != split(kSpectrumHeader, ','))
        throw IoError("<text>", "missing spectrum header");
    std::vector<SpectrumRow> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw IoError("<text>", "expected 9 fields, got " + std::to_string(f.size()));
        SpectrumRow r;
        r.level_q = static_cast<int>(parse_long(f[0]));
        if (f[1] == "full") {
            r.full_block = true;
        } else {
            r.block_m = static_cast<int>(parse_long(f[1]));
        }
        r.lambda = {parse_double(f[2]), parse_double(f[3])};
        r.k = {parse_double(f[4]), parse_double(f[5])};
        r.multiplicity = static_cast<int>(parse_long(f[6]));
        r.residual = parse_double(f[7]);
        if (f[8] != "0" && f[8] != "1") throw IoError("<text>", "in_sector must be 0 or 1");
        r.in_sector = f[8] == "1";
        rows.push_back(r);
    }
    return rows;
}

std::string counting_csv(const std::vector<CountingRow>& rows) {
    std::string out = "r,log_r,N_toeplitz,N_annulus,phi_model,ratio\n";
    for (const auto& r : rows) {
        out += format_double(r.r) + "," + format_double(r.log_r) + "," + std::to_string(r.N_toeplitz) + "," +
               std::to_string(r.N_annulus) + "," + format_double(r.phi_model) + "," + format_double(r.ratio) + "\n";
    }
    return out;
}

std::string index_csv(const std::vector<IndexRow>& rows) {
    std::string out = "k_re,k_im,multiplicity_index,multiplicity_cluster\n";
    for (const auto& r : rows) {
        out += format_double(r.k.real()) + "," + format_double(r.k.imag()) + "," +
               std::to_string(r.multiplicity_index) + "," + std::to_string(r.multiplicity_cluster) + "\n";
    }
    return out;
}

std::string kplane_svg(const std::vector<cplx>& ks, const SectorSpec& sec, int level_q) {
    // sector corners in z, then k = -J z e^{i alpha}
    const cplx rot = -double(sec.sign_J) * std::polar(1.0, sec.alpha);
    const std::vector<cplx> corners = {rot * cplx(sec.r, -sec.delta * sec.r), rot * cplx(sec.r0, -sec.delta * sec.r0),
                                       rot * cplx(sec.r0, sec.delta * sec.r0), rot * cplx(sec.r, sec.delta * sec.r)};
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    auto grow = [&](cplx z) {
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        y0 = std::min(y0, z.imag());
        y1 = std::max(y1, z.imag());
    };
    for (auto c : corners) grow(c);
    for (auto k : ks)
        if (std::isfinite(k.real()) && std::isfinite(k.imag())) grow(k);
    const double span = std::max({x1 - x0, y1 - y0, 1e-300}) * 1.1;
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const double size = 480, margin = 40;
    auto px = [&](cplx z) {
        const double sx = margin + (z.real() - cx + span / 2) / span * (size - 2 * margin);
        const double sy = margin + (cy + span / 2 - z.imag()) / span * (size - 2 * margin);
        return format_double(sx) + "," + format_double(sy);
    };
    auto coord = [&](cplx z, int which) {
        const auto s = px(z);
        const auto comma = s.find(',');
        return which == 0 ? s.substr(0, comma) : s.substr(comma + 1);
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
    out += "<title>k-plane near level q=" + std::to_string(level_q) + "</title>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"white\"/>\n";
    const cplx left(cx - span / 2, 0), right(cx + span / 2, 0), bottom(0, cy - span / 2), top(0, cy + span / 2);
    out += "<line x1=\"" + coord(left, 0) + "\" y1=\"" + coord(left, 1) + "\" x2=\"" + coord(right, 0) + "\" y2=\"" +
           coord(right, 1) + "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + coord(bottom, 0) + "\" y1=\"" + coord(bottom, 1) + "\" x2=\"" + coord(top, 0) +
           "\" y2=\"" + coord(top, 1) + "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    out += "<polygon points=\"";
    for (std::size_t i = 0; i < corners.size(); ++i) out += (i ? " " : "") + px(corners[i]);
    out += "\" fill=\"#4a90d9\" fill-opacity=\"0.15\" stroke=\"#4a90d9\"/>\n";
    for (auto k : ks) {
        if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) continue;
        out += "<circle cx=\"" + coord(k, 0) + "\" cy=\"" + coord(k, 1) + "\" r=\"3\" fill=\"#c0392b\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << content;
    out.close();
    if (!out) throw IoError(path, "write failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError(path, "cannot create directory: " + ec.message());
    if (!std::filesystem::is_directory(path)) throw IoError(path, "not a directory");
}

}  // namespace speclab
