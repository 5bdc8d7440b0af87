#include "speclab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "speclab/errors.hpp"

namespace speclab {

using json = nlohmann::json;

namespace {

struct Pos {
    int line = 1;
    int col = 1;
};

// Maps the JSON pointer of every object key to where the key appears in the
// source text. Only used to make error messages point at a line.
std::map<std::string, Pos> key_positions(const std::string& text) {
    struct Frame {
        bool obj;
        std::string key;
        int index = 0;
        bool expect_key = true;
    };
    std::map<std::string, Pos> out;
    std::vector<Frame> stack;
    Pos pos;
    auto path_of = [&](std::size_t depth) {
        std::string p;
        for (std::size_t i = 0; i < depth; ++i)
            p += "/" + (stack[i].obj ? stack[i].key : std::to_string(stack[i].index));
        return p;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++pos.line;
            pos.col = 1;
            continue;
        }
        if (c == '"') {
            const Pos start = pos;
            std::string s;
            ++pos.col;
            for (++i; i < text.size() && text[i] != '"'; ++i, ++pos.col) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    s += text[++i];
                    ++pos.col;
                } else {
                    s += text[i];
                }
            }
            ++pos.col;
            if (!stack.empty() && stack.back().obj && stack.back().expect_key) {
                stack.back().key = s;
                stack.back().expect_key = false;
                out[path_of(stack.size())] = start;
            }
            continue;
        }
        switch (c) {
            case '{': stack.push_back({true, "", 0, true}); break;
            case '[': stack.push_back({false, "", 0, false}); break;
            case '}':
            case ']':
                if (!stack.empty()) stack.pop_back();
                break;
            case ',':
                if (!stack.empty()) {
                    if (stack.back().obj)
                        stack.back().expect_key = true;
                    else
                        ++stack.back().index;
                }
                break;
            default: break;
        }
        ++pos.col;
    }
    return out;
}

class Reader {
public:
    explicit Reader(const std::string& text) : pos_(key_positions(text)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        std::string p = path;
        for (;;) {
            if (auto it = pos_.find(p); it != pos_.end()) {
                throw ConfigError(path.empty() ? "/" : path, "line " + std::to_string(it->second.line) + ", column " +
                                                                 std::to_string(it->second.col) + ": " + what);
            }
            const auto cut = p.find_last_of('/');
            if (cut == std::string::npos || p.empty()) break;
            p = p.substr(0, cut);
        }
        throw ConfigError(path.empty() ? "/" : path, what);
    }

    void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
        if (!obj.is_object()) fail(path, "expected an object");
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!ok.count(it.key())) fail(path + "/" + it.key(), "unknown key '" + it.key() + "'");
    }

    const json& require(const json& obj, const std::string& path, const char* key) const {
        if (!obj.contains(key)) fail(path, std::string("missing required key '") + key + "'");
        return obj.at(key);
    }

    double number(const json& obj, const std::string& path, const char* key, std::optional<double> def) const {
        if (!obj.contains(key)) {
            if (!def) fail(path, std::string("missing required key '") + key + "'");
            return *def;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) fail(path + "/" + key, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path + "/" + key, "must be finite");
        return d;
    }

    int integer(const json& obj, const std::string& path, const char* key, std::optional<int> def) const {
        if (!obj.contains(key)) {
            if (!def) fail(path, std::string("missing required key '") + key + "'");
            return *def;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
        return v.get<int>();
    }

    std::vector<double> numbers(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array of numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) fail(path, "expected an array of numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::string string(const json& obj, const std::string& path, const char* key) const {
        const json& v = require(obj, path, key);
        if (!v.is_string()) fail(path + "/" + key, "expected a string");
        return v.get<std::string>();
    }

private:
    std::map<std::string, Pos> pos_;
};

AngularProfile parse_u0(const Reader& rd, const json& v, const std::string& path) {
    AngularProfile u0;
    if (v.is_number()) {
        u0.constant = v.get<double>();
        return u0;
    }
    if (!v.is_array() || v.empty()) rd.fail(path, "u0 must be a number or a non-empty array of arcs");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        rd.allow(v[i], p, {"from", "to", "value"});
        u0.arcs.push_back({rd.number(v[i], p, "from", std::nullopt), rd.number(v[i], p, "to", std::nullopt),
                           rd.number(v[i], p, "value", std::nullopt)});
    }
    return u0;
}

Profile parse_profile(const Reader& rd, const json& v, const std::string& path) {
    if (!v.is_object()) rd.fail(path, "expected an object");
    const std::string type = rd.string(v, path, "type");
    if (type == "disk") {
        rd.allow(v, path, {"type", "R", "height"});
        return Disk{rd.number(v, path, "R", std::nullopt), rd.number(v, path, "height", std::nullopt)};
    }
    if (type == "power") {
        rd.allow(v, path, {"type", "u0", "m"});
        PowerDecay pd;
        pd.m = rd.number(v, path, "m", std::nullopt);
        pd.u0 = parse_u0(rd, rd.require(v, path, "u0"), path + "/u0");
        return pd;
    }
    if (type == "gaussian") {
        rd.allow(v, path, {"type", "mu", "beta", "height"});
        return GaussianType{rd.number(v, path, "mu", std::nullopt), rd.number(v, path, "beta", std::nullopt),
                            rd.number(v, path, "height", 1.0)};
    }
    if (type == "constant") {
        rd.allow(v, path, {"type", "value"});
        return ConstantProfile{rd.number(v, path, "value", std::nullopt)};
    }
    if (type == "table") {
        rd.allow(v, path, {"type", "r", "value", "tail"});
        RadialTable t;
        t.r = rd.numbers(rd.require(v, path, "r"), path + "/r");
        t.value = rd.numbers(rd.require(v, path, "value"), path + "/value");
        if (v.contains("tail")) {
            const json& tail = v.at("tail");
            const std::string tp = path + "/tail";
            const std::string kind = rd.string(tail, tp, "type");
            if (kind == "compact") {
                rd.allow(tail, tp, {"type"});
                t.tail = TailKind::compact;
            } else if (kind == "power") {
                rd.allow(tail, tp, {"type", "m"});
                t.tail = TailKind::power;
                t.tail_m = rd.number(tail, tp, "m", std::nullopt);
            } else if (kind == "gaussian") {
                rd.allow(tail, tp, {"type", "mu", "beta"});
                t.tail = TailKind::gaussian;
                t.tail_mu = rd.number(tail, tp, "mu", std::nullopt);
                t.tail_beta = rd.number(tail, tp, "beta", std::nullopt);
            } else {
                rd.fail(tp + "/type", "unknown tail type '" + kind + "' (compact, power, gaussian)");
            }
        }
        return t;
    }
    if (type == "grid") {
        rd.allow(v, path, {"type", "box", "nx", "ny", "values"});
        Grid2D g;
        const auto box = rd.numbers(rd.require(v, path, "box"), path + "/box");
        if (box.size() != 4) rd.fail(path + "/box", "box is [x_min, x_max, y_min, y_max]");
        g.x_min = box[0];
        g.x_max = box[1];
        g.y_min = box[2];
        g.y_max = box[3];
        const int nx = rd.integer(v, path, "nx", std::nullopt);
        const int ny = rd.integer(v, path, "ny", std::nullopt);
        if (nx < 0 || ny < 0) rd.fail(path, "nx and ny must be positive");
        g.nx = static_cast<std::size_t>(nx);
        g.ny = static_cast<std::size_t>(ny);
        g.values = rd.numbers(rd.require(v, path, "values"), path + "/values");
        return g;
    }
    rd.fail(path + "/type", "unknown profile type '" + type + "' (disk, power, gaussian, table, grid, constant)");
}

}  // namespace

bool OutputConfig::wants(const std::string& fmt) const {
    return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("/", "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                   ": malformed document");
    }
    const Reader rd(text);
    rd.allow(doc, "", {"landau", "potential", "analysis", "output", "tol"});
    RunConfig cfg;

    const json& lj = rd.require(doc, "", "landau");
    rd.allow(lj, "/landau", {"b", "q_max", "j_max"});
    cfg.landau.b = rd.number(lj, "/landau", "b", std::nullopt);
    cfg.landau.q_max = rd.integer(lj, "/landau", "q_max", 5);
    cfg.landau.j_max = rd.integer(lj, "/landau", "j_max", 60);
    try {
        cfg.landau.validate();
    } catch (const ParameterError& e) {
        rd.fail("/landau", e.what());
    }

    const json& pj = rd.require(doc, "", "potential");
    rd.allow(pj, "/potential", {"alpha", "sign_J", "schatten_p", "profile"});
    cfg.potential.alpha = rd.number(pj, "/potential", "alpha", 0.0);
    cfg.potential.sign_J = rd.integer(pj, "/potential", "sign_J", -1);
    cfg.potential.schatten_p = rd.number(pj, "/potential", "schatten_p", 2.0);
    cfg.potential.profile = parse_profile(rd, rd.require(pj, "/potential", "profile"), "/potential/profile");
    try {
        validate(cfg.potential);
    } catch (const ParameterError& e) {
        rd.fail("/potential/profile", e.what());
    }

    const double b = cfg.landau.b;
    const json empty = json::object();
    const json& aj = doc.contains("analysis") ? doc.at("analysis") : empty;
    rd.allow(aj, "/analysis", {"level_q", "r", "r0", "delta", "p", "r_grid", "contour_nodes", "grid_density"});
    auto& an = cfg.analysis;
    an.level_q = rd.integer(aj, "/analysis", "level_q", std::min(1, cfg.landau.q_max));
    an.r0 = rd.number(aj, "/analysis", "r0", 0.3 * 2.0 * b);
    an.r = rd.number(aj, "/analysis", "r", an.r0 / 30.0);
    an.delta = rd.number(aj, "/analysis", "delta", 0.5);
    an.p = rd.number(aj, "/analysis", "p", 2.0);
    an.contour_nodes = rd.integer(aj, "/analysis", "contour_nodes", 64);
    an.grid_density = rd.integer(aj, "/analysis", "grid_density", 40);
    if (an.level_q < 0 || an.level_q > cfg.landau.q_max) rd.fail("/analysis/level_q", "level_q must be in [0, q_max]");
    if (!(an.r0 > 0) || !(an.r0 < 2.0 * b)) rd.fail("/analysis/r0", "r0 must satisfy 0 < r0 < 2b");
    if (!(an.r > 0)) rd.fail("/analysis/r", "r must be > 0");
    if (!(an.r < an.r0)) rd.fail("/analysis/r", "r must be < r0");
    if (!(an.delta > 0)) rd.fail("/analysis/delta", "delta must be > 0");
    if (!(an.p >= 2)) rd.fail("/analysis/p", "p must be >= 2");
    if (an.contour_nodes < 16 || (an.contour_nodes & (an.contour_nodes - 1)) != 0)
        rd.fail("/analysis/contour_nodes", "contour_nodes must be a power of two >= 16");
    if (an.grid_density < 4) rd.fail("/analysis/grid_density", "grid_density must be >= 4");
    if (aj.contains("r_grid")) {
        const json& g = aj.at("r_grid");
        if (g.is_array()) {
            an.r_grid = rd.numbers(g, "/analysis/r_grid");
        } else {
            rd.allow(g, "/analysis/r_grid", {"from", "to", "points"});
            const double from = rd.number(g, "/analysis/r_grid", "from", std::nullopt);
            const double to = rd.number(g, "/analysis/r_grid", "to", std::nullopt);
            const int n = rd.integer(g, "/analysis/r_grid", "points", std::nullopt);
            if (!(from > 0) || !(to > from) || n < 2) rd.fail("/analysis/r_grid", "need 0 < from < to and points >= 2");
            for (int i = 0; i < n; ++i) an.r_grid.push_back(from * std::pow(to / from, double(i) / (n - 1)));
        }
    } else {
        const double to = 0.9 * an.r0;
        for (int i = 0; i < 10; ++i) an.r_grid.push_back(an.r * std::pow(to / an.r, i / 9.0));
    }
    for (double x : an.r_grid)
        if (!(x > 0) || !(x < an.r0)) rd.fail("/analysis/r_grid", "every grid point must lie in (0, r0)");

    if (doc.contains("output")) {
        const json& oj = doc.at("output");
        rd.allow(oj, "/output", {"directory", "formats"});
        if (oj.contains("directory")) cfg.output.directory = rd.string(oj, "/output", "directory");
        if (oj.contains("formats")) {
            const json& f = oj.at("formats");
            if (!f.is_array()) rd.fail("/output/formats", "expected an array of strings");
            cfg.output.formats.clear();
            for (const auto& x : f) {
                if (!x.is_string()) rd.fail("/output/formats", "expected an array of strings");
                const std::string s = x.get<std::string>();
                if (s != "csv" && s != "json" && s != "svg") rd.fail("/output/formats", "unknown format '" + s + "'");
                cfg.output.formats.push_back(s);
            }
        }
    }
    cfg.tol = rd.number(doc, "", "tol", kDefaultTol);
    if (!(cfg.tol > 0)) rd.fail("/tol", "tol must be > 0");

    cfg.canonical = doc.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : cfg.canonical) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    cfg.hash = h;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace speclab
