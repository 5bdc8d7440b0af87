#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gen.hpp"
#include "speclab/birman_schwinger.hpp"
#include "speclab/errors.hpp"

using namespace speclab;

namespace {

constexpr double kPi = 3.14159265358979323846;

PotentialSpec power_potential(double alpha) {
    PowerDecay pd;
    pd.u0.constant = 5.0;
    pd.m = 4.0;
    return PotentialSpec{alpha, -1, 2.0, pd};
}

PotentialSpec disk_potential(double alpha, double height = 0.2) { return PotentialSpec{alpha, -1, 2.0, Disk{1.0, height}}; }

struct Run {
    HamiltonianBlocks hb;
    ComplexSpectrum cluster;
    BSContext ctx;
};

Run make_run(const LandauConfig& cfg, const PotentialSpec& pot, int q, double r, double r0) {
    Run run;
    run.hb = build_hamiltonian(cfg, pot);
    run.cluster = annulus_entries(cluster_near_level(discrete_spectrum(run.hb, q), q, r0), r, r0);
    run.ctx = make_bs_context(run.hb);
    return run;
}

int winding(const std::function<cplx(cplx)>& f, cplx c, double rad) { return index_contour(f, ContourSpec{c, rad, 64}); }

}  // namespace

TEST_CASE("one-mode block on another level: T = e^{i alpha} J v / (2bq' - lambda)") {
    const LandauConfig cfg{1.0, 1, 1};
    const auto pot = disk_potential(0.6, 0.9);
    const auto ctx = make_bs_context(build_hamiltonian(cfg, pot));
    const int q = 0;
    const auto it = std::find_if(ctx.blocks.begin(), ctx.blocks.end(),
                                 [](const BSBlock& b) { return b.level_index.size() == 1 && b.level_index[0] == 1; });
    REQUIRE(it != ctx.blocks.end());
    const double v = radial_matrix_element(1, 1, 0, pot.profile, cfg);
    const cplx k(0.13, -0.04);
    const cplx lambda = -k;
    const ComplexMatrix t = block_resolvent(*it, pot.phase(), q, cfg.b, k);
    CHECK(std::abs(t(0, 0) - pot.phase() * v / (2.0 - lambda)) <= 1e-15);
}

TEST_CASE("alpha = 0: T(conj k)^* = T(k)") {
    const LandauConfig cfg{1.0, 3, 20};
    const auto ctx = make_bs_context(build_hamiltonian(cfg, power_potential(0.0)));
    const cplx k(0.11, 0.07);
    const auto a = weighted_resolvent(k, 1, ctx, false).matrix;
    const auto b = weighted_resolvent(std::conj(k), 1, ctx, false).matrix.adjoint();
    CHECK((a - b).max_abs() <= 1e-14 * a.max_abs());
}

TEST_CASE("Schatten norm is finite and grows as k approaches the level") {
    const LandauConfig cfg{1.0, 3, 30};
    const auto ctx = make_bs_context(build_hamiltonian(cfg, disk_potential(kPi / 4)));
    double prev = 0;
    for (double a : {0.4, 0.2, 0.1, 0.05, 0.01}) {
        const double s = schatten_norm(weighted_resolvent(cplx(a, 0.0), 1, ctx, false).matrix, 2.0);
        CHECK(std::isfinite(s));
        CHECK(s > prev);
        prev = s;
    }
    CHECK(std::abs(schatten_norm(ComplexMatrix{{3, 0}, {0, 4}}, 2.0) - 5.0) <= 1e-14);
}

TEST_CASE("constant potential: singular core is c times the level projection") {
    const LandauConfig cfg{1.0, 2, 7};
    const double c = 0.3;
    const auto ctx = make_bs_context(build_hamiltonian(cfg, PotentialSpec{0.4, -1, 2.0, ConstantProfile{c}}));
    const cplx k(0.1, 0.0);
    const auto op = weighted_resolvent(k, 1, ctx, true);
    const ComplexMatrix core = op.split->singular * (k / ctx.phase);
    const auto ev = eig_hermitian((core + core.adjoint()) * cplx(0.5)).values;
    int at_c = 0;
    for (const auto& v : ev) {
        if (std::abs(v.real() - c) <= 1e-12)
            ++at_c;
        else
            CHECK(std::abs(v.real()) <= 1e-12);
    }
    CHECK(at_c == cfg.j_max + 1);
}

TEST_CASE("split: reconstruction, spectral identity, k-independence of the core") {
    const LandauConfig cfg{1.0, 5, 60};
    const auto ctx = make_bs_context(build_hamiltonian(cfg, disk_potential(kPi / 4)));
    const auto a = weighted_resolvent(cplx(0.1, 0.0), 1, ctx, true);
    const auto b = weighted_resolvent(cplx(0.0, 0.2), 1, ctx, true);
    const auto rep = singular_split_check(a, ctx);
    CHECK(rep.reconstruction_error <= 1e-12);
    CHECK(rep.spectral_identity_error <= 1e-9);
    CHECK(rep.passed);
    const ComplexMatrix ca = a.split->singular * cplx(0.1, 0.0);
    const ComplexMatrix cb = b.split->singular * cplx(0.0, 0.2);
    CHECK((ca - cb).max_abs() <= 1e-15 * std::max(1.0, ca.max_abs()));

    BSOperator broken = a;
    broken.split->regular = broken.split->regular * cplx(2.0);
    CHECK_THROWS_AS(singular_split_check(broken, ctx), ConsistencyError);

    const auto cut = cutoff_split_check(ctx, 1, 0.05);
    CHECK(cut.reconstruction_error <= 1e-12);
    CHECK(cut.norm_small <= 0.025);
}

TEST_CASE("regularized_det") {
    CHECK(regularized_det(ComplexMatrix(3, 3), 2.0) == cplx(1.0));
    CHECK(std::abs(regularized_det(ComplexMatrix{{1}}, 2.0) - 2.0 / std::exp(1.0)) <= 1e-15);
    CHECK(std::abs(regularized_det(ComplexMatrix{{1}}, 2.0) - 0.7357588824) <= 1e-10);
    gen::Rng g(10);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix k = gen::general(g, 10) * cplx(0.3);
        ComplexMatrix ik = k;
        for (std::size_t i = 0; i < 10; ++i) ik(i, i) += 1.0;
        const cplx d = det_lu(ik);
        CHECK(std::abs(regularized_det(k, 1.0) - d) <= 1e-10 * std::abs(d));
    }
}

TEST_CASE("bs_check: scalar case and cross-check with the spectrum") {
    const LandauConfig one{1.0, 0, 0};
    const auto pot = disk_potential(0.8, 0.5);
    const auto ctx1 = make_bs_context(build_hamiltonian(one, pot));
    const double v = radial_matrix_element(0, 0, 0, pot.profile, one);
    const cplx lambda = pot.phase() * v;
    CHECK(bs_check(lambda, 0, ctx1, 2.0).min_dist_to_minus_one <= 1e-15);

    const auto run = make_run(LandauConfig{1.0, 5, 60}, disk_potential(kPi / 4), 1, 0.02, 0.6);
    REQUIRE(run.cluster.entries.size() >= 2);
    for (const auto& e : run.cluster.entries) CHECK(bs_check(e.lambda, 1, run.ctx, 2.0).min_dist_to_minus_one < 1e-8);

    std::vector<cplx> ks;
    for (const auto& e : run.cluster.entries) ks.push_back(e.k);
    std::sort(ks.begin(), ks.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    const cplx mid = 0.5 * (ks[0] + ks[1]);
    CHECK(std::abs(bs_check(2.0 - mid, 1, run.ctx, 2.0).det_value) > 1e-4);
}

TEST_CASE("index_contour: scalar windings") {
    auto simple = [](cplx k) { return k - 0.1; };
    auto twice = [](cplx k) { return (k - 0.1) * (k - 0.1); };
    CHECK(winding(simple, 0.0, 0.2) == 1);
    CHECK(winding(twice, 0.0, 0.2) == 2);
    CHECK(winding(simple, cplx(1.0, 1.0), 0.2) == 0);
    CHECK(winding([](cplx k) { return 1.0 / (k - 0.1); }, 0.0, 0.2) == -1);
    CHECK_THROWS_AS(winding(simple, 0.0, 0.1), ContourError);
    CHECK_THROWS_AS(index_contour(simple, ContourSpec{0.0, 0.2, 48}), ParameterError);
}

TEST_CASE("property: index is additive over products") {
    gen::Rng g(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<cplx> ra, rb;
        for (int i = g.integer(0, 4); i > 0; --i) ra.push_back({g.uniform(-1, 1), g.uniform(-1, 1)});
        for (int i = g.integer(0, 4); i > 0; --i) rb.push_back({g.uniform(-1, 1), g.uniform(-1, 1)});
        const auto pa = gen::poly_from_roots(ra), pb = gen::poly_from_roots(rb);
        const cplx c(g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5));
        const double rad = g.uniform(0.2, 0.9);
        auto inside = [&](const std::vector<cplx>& rs) {
            int n = 0;
            for (const cplx& z : rs) n += std::abs(z - c) < rad;
            return n;
        };
        bool near_contour = false;
        for (const auto* rs : {&ra, &rb})
            for (const cplx& z : *rs) near_contour |= std::abs(std::abs(z - c) - rad) < 1e-3;
        if (near_contour) continue;
        auto fa = [&](cplx k) { return gen::poly_eval(pa, k); };
        auto fb = [&](cplx k) { return gen::poly_eval(pb, k); };
        const int ia = winding(fa, c, rad), ib = winding(fb, c, rad);
        CHECK(winding([&](cplx k) { return fa(k) * fb(k); }, c, rad) == ia + ib);
        CHECK(ia == inside(ra));
        CHECK(ib == inside(rb));
    }
}

TEST_CASE("T is analytic: Cauchy integral reproduces it") {
    const LandauConfig cfg{1.0, 3, 20};
    const auto ctx = make_bs_context(build_hamiltonian(cfg, disk_potential(0.5)));
    const cplx k0(0.5, 0.3);
    const double rad = 0.2;
    const int n = 256;
    const ComplexMatrix direct = weighted_resolvent(k0, 1, ctx, false).matrix;
    ComplexMatrix acc(direct.rows(), direct.cols());
    for (int j = 0; j < n; ++j) {
        const cplx w = std::polar(rad, 2 * kPi * j / n);
        // (1/2 pi i) T(k) / (k - k0) dk with dk = i w dtheta
        acc += weighted_resolvent(k0 + w, 1, ctx, false).matrix * cplx(1.0 / n);
    }
    CHECK((acc - direct).max_abs() <= 1e-7);
}

TEST_CASE("regularized and plain determinants share zeros along a slice") {
    const auto run = make_run(LandauConfig{1.0, 5, 60}, power_potential(0.0), 1, 0.01, 0.3);
    std::vector<int> s_plain, s_reg;
    double prev_p = 0, prev_r = 0;
    for (int i = 0; i <= 3000; ++i) {
        const double k = 0.011 + (0.29 - 0.011) * i / 3000.0;
        const auto c = bs_check(cplx(2.0 - k), 1, run.ctx, 2.0);
        const double p = c.det_value.real(), r = c.det_p_value.real();
        if (i > 0) {
            if ((p > 0) != (prev_p > 0)) s_plain.push_back(i);
            if ((r > 0) != (prev_r > 0)) s_reg.push_back(i);
        }
        prev_p = p;
        prev_r = r;
    }
    CHECK(!s_plain.empty());
    CHECK(s_plain == s_reg);
}

TEST_CASE("characteristic values: scalar case, annulus agreement, empty region") {
    const LandauConfig one{1.0, 0, 0};
    const auto pot = PotentialSpec{kPi / 3, -1, 2.0, Disk{1.0, 0.25}};
    const auto ctx1 = make_bs_context(build_hamiltonian(one, pot));
    const double v = radial_matrix_element(0, 0, 0, pot.profile, one);
    const auto res1 = characteristic_values(0.01, 0.3, 0, ctx1);
    REQUIRE(res1.values.size() == 1);
    CHECK(std::abs(res1.values[0].k + pot.phase() * v) <= 1e-12);
    CHECK(res1.values[0].multiplicity == 1);
    CHECK(res1.annulus_index == 1);

    const auto run = make_run(LandauConfig{1.0, 5, 60}, power_potential(kPi / 4), 1, 0.01, 0.3);
    const auto res = characteristic_values(0.01, 0.3, 1, run.ctx);
    int total = 0;
    for (const auto& cv : res.values) total += cv.multiplicity;
    CHECK(total == int(run.cluster.entries.size()));
    CHECK(res.annulus_index == total);
    CHECK(res.unresolved.empty());
    for (const auto& cv : res.values) {
        const int mult = winding([&](cplx k) { return full_det(run.ctx, 1, k); }, cv.k, cv.circle_radius);
        CHECK(mult == cv.multiplicity);
    }

    const auto tiny = make_bs_context(build_hamiltonian(LandauConfig{1.0, 5, 60}, disk_potential(kPi / 4, 1e-15)));
    const auto none = characteristic_values(0.01, 0.3, 1, tiny);
    CHECK(none.values.empty());
    CHECK(none.annulus_index == 0);
}

TEST_CASE("assumption check") {
    const auto pos = make_bs_context(build_hamiltonian(LandauConfig{1.0, 0, 20}, power_potential(0.5)));
    const auto r0 = assumption_check(0, pos);
    CHECK(r0.kernel_dim == 0);
    CHECK(r0.smallest_singular_value == 1.0);
    CHECK(r0.invertible);

    const auto ctx = make_bs_context(build_hamiltonian(LandauConfig{1.0, 5, 60}, disk_potential(kPi / 4)));
    CHECK(assumption_check(1, ctx).invertible);
    const auto phases = degenerate_phases(1, ctx);
    REQUIRE(!phases.empty());
    const auto bad = assumption_check(1, ctx, phases.front());
    CHECK(bad.smallest_singular_value < 1e-8);
    CHECK_FALSE(bad.invertible);
}

TEST_CASE("errors") {
    const auto ctx = make_bs_context(build_hamiltonian(LandauConfig{1.0, 2, 5}, disk_potential(0.3)));
    CHECK_THROWS_AS(weighted_resolvent(cplx(0.0), 1, ctx), PoleError);
    CHECK_THROWS_AS(weighted_resolvent(cplx(0.1), 7, ctx), ParameterError);
    CHECK_THROWS_AS(ContourSpec({0.0, -1.0, 64}).validate(), ParameterError);
    CHECK_THROWS_AS(schatten_norm(ComplexMatrix{{1}}, 0.5), ParameterError);
}
