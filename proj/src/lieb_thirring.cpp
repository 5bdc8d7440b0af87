#include "speclab/lieb_thirring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

double pairwise_range(const std::vector<double>& t, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += t[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_range(t, lo, mid) + pairwise_range(t, mid, hi);
}

}  // namespace

double pairwise_sum(const std::vector<double>& terms) { return pairwise_range(terms, 0, terms.size()); }

double lt_global_sum(const ComplexSpectrum& spec, double b, int q_max, double p) {
    if (!(p >= 2)) throw ParameterError("lieb-thirring", "p must be >= 2");
    if (!(b > 0)) throw ParameterError("lieb-thirring", "b must be > 0");
    std::vector<double> terms;
    terms.reserve(spec.entries.size());
    for (const auto& e : spec.entries) {
        double dist = std::numeric_limits<double>::infinity();
        for (int q = 0; q <= q_max; ++q) dist = std::min(dist, std::abs(e.lambda - 2.0 * b * q));
        terms.push_back(std::pow(dist, p) / std::pow(1.0 + std::abs(e.lambda), 2.0 * p));
    }
    return pairwise_sum(terms);
}

double stepwise_moment_integral(std::vector<double> xs, double p, double a, double top) {
    if (!(top > a)) return 0.0;
    std::sort(xs.begin(), xs.end());
    // n(t) drops by one at each x in (a, top); values >= top keep it raised
    // over the whole interval.
    std::size_t first = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), a) - xs.begin());
    std::size_t n = xs.size() - first;
    double t = a;
    std::vector<double> pieces;
    for (std::size_t i = first; i < xs.size() && xs[i] < top; ++i) {
        pieces.push_back(double(n) * (std::pow(xs[i], p) - std::pow(t, p)));
        t = xs[i];
        --n;
    }
    pieces.push_back(double(n) * (std::pow(top, p) - std::pow(t, p)));
    return pairwise_sum(pieces);
}

MomentReport lt_local_comparison(const ComplexSpectrum& spec, const CountingFunction& counting, double p, double r,
                                 double r0, double alpha, int sign_J) {
    if (!(p >= 2)) throw ParameterError("lieb-thirring", "p must be >= 2");
    if (!(r > 0) || !(r < r0)) throw ParameterError("lieb-thirring", "need 0 < r < r0");
    MomentReport rep;
    rep.p = p;
    rep.global_sum = lt_global_sum(spec, spec.b, spec.q_max, p);
    std::vector<double> ks, mus, kp, mp;
    for (const auto& e : spec.entries) {
        const double a = std::abs(e.k);
        if (!(a > r && a < r0)) continue;
        const cplx z = -double(sign_J) * e.k * std::polar(1.0, -alpha);
        if (!(z.real() > 0)) {
            ++rep.outside;
            continue;
        }
        ++rep.counted;
        ks.push_back(a);
        mus.push_back(z.real());
        kp.push_back(std::pow(a, p));
        mp.push_back(std::pow(z.real(), p));
        rep.delta = std::max(rep.delta, std::abs(z.imag()) / z.real());
    }
    rep.local_sum = pairwise_sum(kp);
    rep.mu_sum = pairwise_sum(mp);
    rep.integral_form = stepwise_moment_integral(ks, p, r, r0);
    rep.boundary_term = std::pow(r, p) * double(ks.size());
    {
        std::vector<double> inside;
        for (double m : mus)
            if (m < r0) inside.push_back(m);
        rep.mu_integral_form = stepwise_moment_integral(inside, p, r, r0);
    }
    rep.ratio = rep.integral_form > 0 ? rep.local_sum / rep.integral_form : 0.0;
    rep.identity_residual =
        rep.local_sum > 0 ? std::abs(rep.local_sum - rep.integral_form - rep.boundary_term) / rep.local_sum : 0.0;
    const double slack = 1e-12 * rep.local_sum;
    rep.sandwich_holds = rep.mu_sum <= rep.local_sum + slack &&
                         rep.local_sum <= std::pow(1.0 + rep.delta * rep.delta, 0.5 * p) * rep.mu_sum + slack;
    if (counting.size() > 0) rep.toeplitz_integral = stepwise_moment_integral(counting.values, p, r, r0);
    return rep;
}

}  // namespace speclab
