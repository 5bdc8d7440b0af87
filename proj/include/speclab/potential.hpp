#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "speclab/linalg.hpp"

namespace speclab {

/// Angular profile u0 on the unit circle: a constant, or piecewise
/// constant on arcs [from, to) (radians, taken mod 2pi; uncovered angles
/// are 0).
struct AngularProfile {
    struct Arc {
        double from;
        double to;
        double value;
    };
    double constant = 1.0;
    std::vector<Arc> arcs;

    bool is_constant() const { return arcs.empty(); }
    double operator()(double theta) const;
    double max_value() const;
    // (1/2pi) * integral of u0(t) e^{i dm t} dt, exact for arcs.
    cplx fourier(int dm) const;
    // integral over the circle of u0(t)^e dt, exact for arcs.
    double power_integral(double e) const;
};

/// |V| = u0(theta) * (1 + |x|^2)^(-m/2)
struct PowerDecay {
    AngularProfile u0;
    double m = 2.0;
};

/// |V| = height * exp(-mu |x|^(2 beta))
struct GaussianType {
    double mu = 1.0;
    double beta = 1.0;
    double height = 1.0;
};

/// |V| = height on the disk |x| <= R, 0 outside.
struct Disk {
    double R = 1.0;
    double height = 1.0;
};

/// |V| = value everywhere (no decay; used as a degenerate reference).
struct ConstantProfile {
    double value = 1.0;
};

enum class TailKind { compact, power, gaussian };

/// Linear interpolation of (r, value) samples; below r[0] the first value
/// holds, beyond r.back() the tail descriptor continues from the last value.
struct RadialTable {
    std::vector<double> r;
    std::vector<double> value;
    TailKind tail = TailKind::compact;
    double tail_m = 2.0;      // power: value * (r / r_last)^-m
    double tail_mu = 1.0;     // gaussian: value * exp(-mu (r^2beta - r_last^2beta))
    double tail_beta = 1.0;
};

/// Cartesian samples of |V| on [x_min,x_max] x [y_min,y_max], row-major in
/// y (values[iy * nx + ix]); zero outside the box. Evaluated by tensor
/// cubic Lagrange interpolation.
struct Grid2D {
    double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
    std::size_t nx = 0, ny = 0;
    std::vector<double> values;

    double operator()(double x, double y) const;
    double max_radius() const;
};

using Profile = std::variant<PowerDecay, GaussianType, Disk, RadialTable, Grid2D, ConstantProfile>;

enum class DecayClass { A1, A2, A3, none };

std::string to_string(DecayClass c);

/// W = e^{i alpha} V with V = sign_J * profile.
struct PotentialSpec {
    double alpha = 0.0;
    int sign_J = -1;
    double schatten_p = 2.0;
    Profile profile;

    cplx phase() const;  // e^{i alpha} * sign_J
};

// Throws ParameterError when an invariant of the potential is violated.
void validate(const PotentialSpec& pot);

bool is_radial(const Profile& p);
// Separable non-radial profile u0(theta) f(r).
bool is_separable(const Profile& p);

// |V| at polar point (r, theta).
double profile_value(const Profile& p, double r, double theta);
// ln of the radial part of |V| at r; for a separable profile the angular
// factor u0 is left out. -inf where zero.
double log_radial_value(const Profile& p, double r);
double sup_norm(const Profile& p);
// Radius beyond which |V| vanishes, when compactly supported.
std::optional<double> support_radius(const Profile& p);
DecayClass decay_class(const Profile& p);
const AngularProfile* angular_part(const Profile& p);

}  // namespace speclab
