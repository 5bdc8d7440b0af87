#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gen.hpp"
#include "speclab/errors.hpp"
#include "speclab/toeplitz.hpp"

using namespace speclab;
using boost::multiprecision::cpp_bin_float_50;

namespace {

double log_p_oracle(int j, double x) {
    const cpp_bin_float_50 p = boost::math::gamma_p(cpp_bin_float_50(j + 1), cpp_bin_float_50(x));
    return log(p).convert_to<double>();
}

Grid2D sampled(const Profile& p, double half, double h) {
    Grid2D g;
    g.x_min = g.y_min = -half;
    g.x_max = g.y_max = half;
    g.nx = g.ny = static_cast<std::size_t>(std::lround(2 * half / h)) + 1;
    g.values.resize(g.nx * g.ny);
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double x = -half + h * double(ix), y = -half + h * double(iy);
            g.values[iy * g.nx + ix] = profile_value(p, std::hypot(x, y), std::atan2(y, x));
        }
    return g;
}

}  // namespace

TEST_CASE("constant potential: every eigenvalue is the constant") {
    const auto cf = toeplitz_eigs_radial(1, ConstantProfile{1.0}, LandauConfig{1.0, 2, 30});
    REQUIRE(cf.size() == 31);
    for (double v : cf.values) CHECK(std::abs(v - 1.0) <= 1e-12);
}

TEST_CASE("disk on the lowest level: s_{0,j} = gamma(j+1, bR^2/2)/j!") {
    const LandauConfig cfg{2.0, 0, 200};
    const auto cf = toeplitz_eigs_radial(0, Disk{1.0, 1.0}, cfg);
    REQUIRE(cf.size() == 201);
    CHECK(std::abs(cf.values[0] - 0.6321205588285577) <= 1e-15);
    // log_values are sorted descending, which for the disk is the j order
    for (int j = 0; j <= 200; ++j) {
        const double oracle = log_p_oracle(j, 1.0);
        CHECK(std::abs(cf.log_values[j] - oracle) <= 1e-8 * std::abs(oracle) + 1e-15);
    }
    // frozen values
    CHECK(std::abs(cf.log_values[5] + 7.428320146285941) <= 1e-12);
    CHECK(std::abs(cf.log_values[50] + 153.39018174210547) <= 1e-10);
    CHECK(std::abs(cf.log_values[200] + 869.5303294330408) <= 1e-9);
}

TEST_CASE("Grid2D sample of a radial profile reproduces the radial eigenvalues") {
    const GaussianType gauss{1.0, 1.0, 1.0};
    const Grid2D g = sampled(gauss, 6.0, 0.025);
    for (int q : {0, 1}) {
        const LandauConfig cfg{1.0, 1, 10};
        const auto radial = toeplitz_eigs_radial(q, gauss, cfg);
        const auto general = toeplitz_eigs_general(q, g, cfg);
        REQUIRE(radial.size() == general.size());
        for (std::size_t i = 0; i < radial.size(); ++i) CHECK(std::abs(radial.values[i] - general.values[i]) <= 1e-6);
    }
}

TEST_CASE("Grid2D: constant on a large box, rank bound") {
    Grid2D g;
    g.x_min = g.y_min = -30;
    g.x_max = g.y_max = 30;
    g.nx = g.ny = 61;
    g.values.assign(61 * 61, 0.7);
    const LandauConfig cfg{1.0, 0, 12};
    const auto cf = toeplitz_eigs_general(0, g, cfg);
    CHECK(cf.size() <= std::size_t(cfg.j_max + 1));
    for (double v : cf.values) CHECK(std::abs(v - 0.7) <= 1e-9);
}

TEST_CASE("counting_query") {
    const auto cf = make_counting_function({std::log(0.05), std::log(0.5), std::log(0.2)}, 0, 2);
    CHECK(counting_query(cf, 0.1) == 2);
    CHECK(counting_query(cf, 0.6) == 0);
    CHECK(counting_query(cf, 0.01) == 3);
    CHECK_THROWS_AS(counting_query(cf, 0.0), DomainError);

    const auto disk = toeplitz_eigs_radial(0, Disk{1.0, 1.0}, LandauConfig{2.0, 0, 200});
    const double lr = std::log(1e-40);
    const auto direct = std::count_if(disk.log_values.begin(), disk.log_values.end(), [&](double l) { return l > lr; });
    CHECK(counting_query(disk, 1e-40) == std::size_t(direct));
    CHECK(counting_query_log(disk, -500.0) ==
          std::size_t(std::count_if(disk.log_values.begin(), disk.log_values.end(), [](double l) { return l > -500.0; })));
}

TEST_CASE("model_phi") {
    ModelParams a2;
    a2.b = 1.0;
    a2.mu = 1.0;
    a2.beta = 1.0;
    CHECK(std::abs(model_phi(DecayClass::A2, a2, std::exp(-10.0)) - 10.0 / std::log(3.0)) <= 1e-12);
    CHECK(std::abs(model_phi(DecayClass::A2, a2, std::exp(-10.0)) - 9.1024) <= 1e-4);
    CHECK(std::abs(model_phi_log(DecayClass::A3, a2, -100.0) - 100.0 / std::log(100.0)) <= 1e-12);
    CHECK(std::abs(model_phi_log(DecayClass::A3, a2, -100.0) - 21.7147) <= 1e-4);

    ModelParams a1;
    a1.b = 1.0;
    a1.m = 2.0;
    a1.u0.constant = 1.0;
    CHECK(std::abs(model_c_m(a1) - 0.5) <= 1e-15);
    CHECK(std::abs(model_phi(DecayClass::A1, a1, 1e-3) - 500.0) <= 1e-9);

    CHECK_THROWS_AS(model_phi(DecayClass::A3, a2, 0.5), DomainError);
    CHECK_THROWS_AS(model_phi(DecayClass::none, a2, 0.01), ParameterError);
}

TEST_CASE("asymptotic_fit: power potential slope") {
    PowerDecay pd;
    pd.u0.constant = 1.0;
    pd.m = 4.0;
    const LandauConfig cfg{1.0, 0, 1500};
    const auto cf = toeplitz_eigs_radial(0, pd, cfg);
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(std::log(1e-5) + i * (std::log(1e-3) - std::log(1e-5)) / 12);
    const auto fit = asymptotic_fit(cf, decay_class(pd), model_params(pd, 1.0), grid);
    CHECK(decay_class(pd) == DecayClass::A1);
    CHECK(fit.dropped == 0);
    CHECK(std::abs(fit.slope - 0.5) <= 0.05);
    for (const auto& row : fit.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("asymptotic_fit: disk ratio toward 1, flat spectrum out of class, floor") {
    const LandauConfig cfg{0.1, 0, 300};
    const Disk disk{1.0, 1.0};
    const auto cf = toeplitz_eigs_radial(0, disk, cfg);
    const auto fit = asymptotic_fit(cf, decay_class(disk), model_params(disk, 0.1), {-100.0, -200.0, -300.0, -400.0});
    REQUIRE(fit.rows.size() == 4);
    for (const auto& row : fit.rows) {
        CHECK(row.ratio >= 0.6);
        CHECK(row.ratio <= 1.5);
    }
    CHECK(std::abs(fit.rows.back().ratio - 1.0) < std::abs(fit.rows.front().ratio - 1.0));

    const auto flat = toeplitz_eigs_radial(0, ConstantProfile{1.0}, LandauConfig{1.0, 0, 20});
    CHECK(asymptotic_fit(flat, DecayClass::none, ModelParams{}, {-5.0}).out_of_class);
    CHECK(asymptotic_fit(flat, DecayClass::A3, ModelParams{}, {-5.0}).out_of_class);

    const auto small = toeplitz_eigs_radial(0, disk, LandauConfig{0.1, 0, 10});
    CHECK_THROWS_AS(asymptotic_fit(small, DecayClass::A3, model_params(disk, 0.1), {-5000.0}), RangeError);
}

TEST_CASE("property: 0 <= s <= sup U for random radial profiles") {
    gen::Rng g(42);
    for (int trial = 0; trial < 30; ++trial) {
        Profile p;
        switch (trial % 3) {
            case 0: p = Disk{g.uniform(0.1, 4.0), g.uniform(0.01, 5.0)}; break;
            case 1: p = GaussianType{g.uniform(0.1, 3.0), g.uniform(0.3, 2.0), g.uniform(0.01, 5.0)}; break;
            default: {
                PowerDecay pd;
                pd.u0.constant = g.uniform(0.01, 5.0);
                pd.m = g.uniform(1.0, 6.0);
                p = pd;
            }
        }
        const LandauConfig cfg{g.uniform(0.2, 3.0), 2, g.integer(5, 40)};
        const auto cf = toeplitz_eigs_radial(g.integer(0, 2), p, cfg);
        const double sup = sup_norm(p);
        for (double v : cf.values) {
            CHECK(v >= 0.0);
            CHECK(v <= sup * (1 + 1e-12));
        }
    }
}

TEST_CASE("property: counting is monotone in the potential") {
    gen::Rng g(9);
    for (int trial = 0; trial < 20; ++trial) {
        const double R1 = g.uniform(0.2, 3.0), R2 = R1 * g.uniform(1.0, 2.0);
        const double h1 = g.uniform(0.1, 2.0), h2 = h1 * g.uniform(1.0, 1.5);
        const LandauConfig cfg{g.uniform(0.3, 2.0), 1, 40};
        const int q = g.integer(0, 1);
        const auto small = toeplitz_eigs_radial(q, Disk{R1, h1}, cfg);
        const auto big = toeplitz_eigs_radial(q, Disk{R2, h2}, cfg);
        for (int k = 0; k < 20; ++k) {
            const double r = std::exp(g.uniform(-60.0, 1.0));
            CHECK(counting_query(small, r) <= counting_query(big, r));
        }
    }
}
