#include "speclab/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    return t < 0 ? t + kTwoPi : t;
}

// Arc as a list of [a, b) sub-intervals inside [0, 2pi).
std::vector<std::pair<double, double>> arc_pieces(const AngularProfile::Arc& arc) {
    double len = arc.to - arc.from;
    if (len >= kTwoPi) return {{0.0, kTwoPi}};
    if (len <= 0) return {};
    const double a = wrap_angle(arc.from);
    const double b = a + len;
    if (b <= kTwoPi) return {{a, b}};
    return {{a, kTwoPi}, {0.0, b - kTwoPi}};
}

double radial_part(const Profile& p, double r) {
    return std::visit(
        [r](const auto& prof) -> double {
            using T = std::decay_t<decltype(prof)>;
            if constexpr (std::is_same_v<T, PowerDecay>) {
                const double c = prof.u0.is_constant() ? prof.u0.constant : 1.0;
                return c * std::pow(1.0 + r * r, -0.5 * prof.m);
            } else if constexpr (std::is_same_v<T, GaussianType>) {
                return prof.height * std::exp(-prof.mu * std::pow(r, 2.0 * prof.beta));
            } else if constexpr (std::is_same_v<T, Disk>) {
                return r <= prof.R ? prof.height : 0.0;
            } else if constexpr (std::is_same_v<T, ConstantProfile>) {
                return prof.value;
            } else if constexpr (std::is_same_v<T, RadialTable>) {
                const auto& rs = prof.r;
                const auto& vs = prof.value;
                if (r <= rs.front()) return vs.front();
                if (r >= rs.back()) {
                    const double v = vs.back();
                    switch (prof.tail) {
                        case TailKind::compact: return r == rs.back() ? v : 0.0;
                        case TailKind::power: return v * std::pow(r / rs.back(), -prof.tail_m);
                        case TailKind::gaussian:
                            return v * std::exp(-prof.tail_mu * (std::pow(r, 2 * prof.tail_beta) -
                                                                  std::pow(rs.back(), 2 * prof.tail_beta)));
                    }
                }
                const auto it = std::upper_bound(rs.begin(), rs.end(), r);
                const std::size_t i = static_cast<std::size_t>(it - rs.begin());
                const double t = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
                return (1 - t) * vs[i - 1] + t * vs[i];
            } else {
                throw DomainError("potential", "Grid2D has no radial part");
            }
        },
        p);
}

}  // namespace

double AngularProfile::operator()(double theta) const {
    if (arcs.empty()) return constant;
    const double t = wrap_angle(theta);
    for (const auto& arc : arcs)
        for (const auto& [a, b] : arc_pieces(arc))
            if (t >= a && t < b) return arc.value;
    return 0.0;
}

double AngularProfile::max_value() const {
    if (arcs.empty()) return constant;
    double m = 0.0;
    for (const auto& arc : arcs) m = std::max(m, arc.value);
    return m;
}

cplx AngularProfile::fourier(int dm) const {
    if (arcs.empty()) return dm == 0 ? cplx(constant) : cplx(0.0);
    cplx sum = 0.0;
    for (const auto& arc : arcs)
        for (const auto& [a, b] : arc_pieces(arc)) {
            if (dm == 0) {
                sum += arc.value * (b - a);
            } else {
                const cplx i{0.0, 1.0};
                sum += arc.value * (std::exp(i * double(dm) * b) - std::exp(i * double(dm) * a)) /
                       (i * double(dm));
            }
        }
    return sum / kTwoPi;
}

double AngularProfile::power_integral(double e) const {
    if (arcs.empty()) return kTwoPi * std::pow(constant, e);
    double sum = 0.0;
    for (const auto& arc : arcs)
        for (const auto& [a, b] : arc_pieces(arc)) sum += std::pow(arc.value, e) * (b - a);
    return sum;
}

double Grid2D::operator()(double x, double y) const {
    if (x < x_min || x > x_max || y < y_min || y > y_max) return 0.0;
    const double hx = (x_max - x_min) / double(nx - 1);
    const double hy = (y_max - y_min) / double(ny - 1);
    const double fx = (x - x_min) / hx;
    const double fy = (y - y_min) / hy;
    // 4-point stencil clamped to the box.
    auto stencil = [](double f, std::size_t n) {
        long i0 = static_cast<long>(std::floor(f)) - 1;
        i0 = std::clamp<long>(i0, 0, static_cast<long>(n) - 4);
        return i0;
    };
    const long ix0 = stencil(fx, nx);
    const long iy0 = stencil(fy, ny);
    auto lagrange = [](double f, long i0, std::array<double, 4>& w) {
        for (int a = 0; a < 4; ++a) {
            double v = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) v *= (f - double(i0 + b)) / double(a - b);
            w[a] = v;
        }
    };
    std::array<double, 4> wx{}, wy{};
    lagrange(fx, ix0, wx);
    lagrange(fy, iy0, wy);
    double s = 0.0;
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a)
            s += wy[b] * wx[a] * values[static_cast<std::size_t>(iy0 + b) * nx + static_cast<std::size_t>(ix0 + a)];
    return std::max(s, 0.0);
}

double Grid2D::max_radius() const {
    const double ax = std::max(std::abs(x_min), std::abs(x_max));
    const double ay = std::max(std::abs(y_min), std::abs(y_max));
    return std::hypot(ax, ay);
}

std::string to_string(DecayClass c) {
    switch (c) {
        case DecayClass::A1: return "A1";
        case DecayClass::A2: return "A2";
        case DecayClass::A3: return "A3";
        case DecayClass::none: return "none";
    }
    return "none";
}

cplx PotentialSpec::phase() const { return std::polar(1.0, alpha) * double(sign_J); }

void validate(const PotentialSpec& pot) {
    const std::string mod = "potential";
    if (pot.sign_J != 1 && pot.sign_J != -1) throw ParameterError(mod, "sign_J must be +1 or -1");
    if (!std::isfinite(pot.alpha)) throw ParameterError(mod, "alpha must be finite");
    if (!(pot.schatten_p >= 2.0)) throw ParameterError(mod, "Schatten exponent p must be >= 2");
    std::visit(
        [&](const auto& prof) {
            using T = std::decay_t<decltype(prof)>;
            if constexpr (std::is_same_v<T, PowerDecay>) {
                if (!(prof.m > 0)) throw ParameterError(mod, "power decay exponent m must be > 0");
                if (!(pot.schatten_p * prof.m > 4.0))
                    throw ParameterError(mod, "power decay needs p*m > 4 so that W is in L^{p/2} (p=" +
                                                  std::to_string(pot.schatten_p) +
                                                  ", m=" + std::to_string(prof.m) + ")");
                if (prof.u0.is_constant() ? !(prof.u0.constant > 0) : prof.u0.max_value() <= 0)
                    throw ParameterError(mod, "angular profile u0 must be nonnegative and not identically 0");
                for (const auto& arc : prof.u0.arcs)
                    if (arc.value < 0) throw ParameterError(mod, "angular profile values must be >= 0");
            } else if constexpr (std::is_same_v<T, GaussianType>) {
                if (!(prof.mu > 0)) throw ParameterError(mod, "mu must be > 0");
                if (!(prof.beta > 0)) throw ParameterError(mod, "beta must be > 0");
                if (!(prof.height > 0)) throw ParameterError(mod, "height must be > 0");
            } else if constexpr (std::is_same_v<T, Disk>) {
                if (!(prof.R > 0)) throw ParameterError(mod, "disk radius R must be > 0");
                if (!(prof.height > 0)) throw ParameterError(mod, "disk height must be > 0");
            } else if constexpr (std::is_same_v<T, ConstantProfile>) {
                if (!(prof.value >= 0)) throw ParameterError(mod, "constant value must be >= 0");
            } else if constexpr (std::is_same_v<T, RadialTable>) {
                if (prof.r.size() < 2 || prof.r.size() != prof.value.size())
                    throw ParameterError(mod, "radial table needs >= 2 (r, value) pairs of equal length");
                for (std::size_t i = 0; i < prof.r.size(); ++i) {
                    if (prof.value[i] < 0) throw ParameterError(mod, "radial table values must be >= 0");
                    if (i > 0 && !(prof.r[i] > prof.r[i - 1]))
                        throw ParameterError(mod, "radial table r must be strictly increasing");
                }
                if (prof.r.front() < 0) throw ParameterError(mod, "radial table r must be >= 0");
                if (prof.tail == TailKind::power && !(pot.schatten_p * prof.tail_m > 4.0))
                    throw ParameterError(mod, "power tail needs p*m > 4");
            } else if constexpr (std::is_same_v<T, Grid2D>) {
                if (prof.nx < 4 || prof.ny < 4) throw ParameterError(mod, "Grid2D needs at least 4x4 samples");
                if (prof.values.size() != prof.nx * prof.ny)
                    throw ParameterError(mod, "Grid2D sample count does not match nx*ny");
                if (!(prof.x_max > prof.x_min) || !(prof.y_max > prof.y_min))
                    throw ParameterError(mod, "Grid2D box is empty");
                for (double v : prof.values)
                    if (!(v >= 0) || !std::isfinite(v)) throw ParameterError(mod, "Grid2D values must be finite and >= 0");
            }
        },
        pot.profile);
}

bool is_radial(const Profile& p) {
    if (const auto* pd = std::get_if<PowerDecay>(&p)) return pd->u0.is_constant();
    return !std::holds_alternative<Grid2D>(p);
}

bool is_separable(const Profile& p) {
    const auto* pd = std::get_if<PowerDecay>(&p);
    return pd && !pd->u0.is_constant();
}

const AngularProfile* angular_part(const Profile& p) {
    if (const auto* pd = std::get_if<PowerDecay>(&p)) return &pd->u0;
    return nullptr;
}

double profile_value(const Profile& p, double r, double theta) {
    if (const auto* g = std::get_if<Grid2D>(&p)) return (*g)(r * std::cos(theta), r * std::sin(theta));
    double v = radial_part(p, r);
    if (is_separable(p)) v *= (*angular_part(p))(theta);
    return v;
}

double log_radial_value(const Profile& p, double r) {
    if (const auto* g = std::get_if<GaussianType>(&p))
        return std::log(g->height) - g->mu * std::pow(r, 2.0 * g->beta);
    if (const auto* pd = std::get_if<PowerDecay>(&p)) {
        const double lc = pd->u0.is_constant() ? std::log(pd->u0.constant) : 0.0;
        return lc - 0.5 * pd->m * std::log1p(r * r);
    }
    if (const auto* t = std::get_if<RadialTable>(&p); t && r > t->r.back() && t->tail != TailKind::compact) {
        const double lv = std::log(t->value.back());
        if (t->tail == TailKind::power) return lv - t->tail_m * std::log(r / t->r.back());
        return lv - t->tail_mu * (std::pow(r, 2 * t->tail_beta) - std::pow(t->r.back(), 2 * t->tail_beta));
    }
    const double v = radial_part(p, r);
    return v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

double sup_norm(const Profile& p) {
    return std::visit(
        [](const auto& prof) -> double {
            using T = std::decay_t<decltype(prof)>;
            if constexpr (std::is_same_v<T, PowerDecay>) return prof.u0.max_value();
            else if constexpr (std::is_same_v<T, GaussianType>) return prof.height;
            else if constexpr (std::is_same_v<T, Disk>) return prof.height;
            else if constexpr (std::is_same_v<T, ConstantProfile>) return prof.value;
            else if constexpr (std::is_same_v<T, RadialTable>) return *std::max_element(prof.value.begin(), prof.value.end());
            else return prof.values.empty() ? 0.0 : *std::max_element(prof.values.begin(), prof.values.end());
        },
        p);
}

std::optional<double> support_radius(const Profile& p) {
    if (const auto* d = std::get_if<Disk>(&p)) return d->R;
    if (const auto* t = std::get_if<RadialTable>(&p); t && t->tail == TailKind::compact) return t->r.back();
    if (const auto* g = std::get_if<Grid2D>(&p)) return g->max_radius();
    return std::nullopt;
}

DecayClass decay_class(const Profile& p) {
    if (std::holds_alternative<PowerDecay>(p)) return DecayClass::A1;
    if (std::holds_alternative<GaussianType>(p)) return DecayClass::A2;
    if (std::holds_alternative<Disk>(p) || std::holds_alternative<Grid2D>(p)) return DecayClass::A3;
    if (const auto* t = std::get_if<RadialTable>(&p)) {
        switch (t->tail) {
            case TailKind::compact: return DecayClass::A3;
            case TailKind::power: return DecayClass::A1;
            case TailKind::gaussian: return DecayClass::A2;
        }
    }
    return DecayClass::none;
}

}  // namespace speclab
