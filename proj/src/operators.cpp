#include "hx/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "hx/parallel.hpp"

namespace hx {

GridFunction frac_laplacian(const GridFunction& f, double s) {
    if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("frac_laplacian: s must be in (0,2]");
    Multiplier m;
    m.symbol = [s](const std::array<double, 2>& xi) -> std::complex<double> {
        return std::pow(xi[0] * xi[0] + xi[1] * xi[1], 0.5 * s);
    };
    m.at_zero = 0.0;
    return apply_multiplier(f, m);
}

GridFunction riesz_potential(const GridFunction& f, double sigma) {
    const double n = (double)f.spec().dim;
    if (!(sigma > 0.0 && sigma < n)) throw std::invalid_argument("riesz_potential: sigma must be in (0,n)");
    Multiplier m;
    m.symbol = [sigma](const std::array<double, 2>& xi) -> std::complex<double> {
        return std::pow(xi[0] * xi[0] + xi[1] * xi[1], -0.5 * sigma);
    };
    m.at_zero = 0.0;
    return apply_multiplier(f, m);
}

GridFunction riesz_transform(const GridFunction& f, int axis) {
    const GridSpec& spec = f.spec();
    if (axis < 0 || axis >= spec.dim) throw std::invalid_argument("riesz_transform: axis out of range");
    SpectralField c = forward_transform(f);
    const int N = spec.points;
    par::for_each(c.size(), [&](std::size_t i) {
        int k1 = 0, k2 = 0;
        if (spec.dim == 1) {
            k1 = spec.wavenumber((int)i);
        } else {
            k1 = spec.wavenumber((int)(i / (std::size_t)N));
            k2 = spec.wavenumber((int)(i % (std::size_t)N));
        }
        const int ka = axis == 0 ? k1 : k2;
        if ((k1 == 0 && k2 == 0) || ka == -N / 2) {
            c[i] = 0.0;
        } else {
            const double x1 = spec.freq(k1), x2 = spec.freq(k2);
            const double nrm = std::sqrt(x1 * x1 + x2 * x2);
            c[i] *= std::complex<double>(0.0, (axis == 0 ? x1 : x2) / nrm);
        }
    });
    return inverse_transform(c);
}

GridFunction hilbert_transform(const GridFunction& f) {
    if (f.spec().dim != 1) throw std::invalid_argument("hilbert_transform: n = 1 only");
    return riesz_transform(f, 0);
}

std::vector<GridFunction> fractional_gradient(const GridFunction& f, double s) {
    GridFunction lf = frac_laplacian(f, s);
    std::vector<GridFunction> g;
    for (int a = 0; a < f.spec().dim; ++a) g.push_back(riesz_transform(lf, a));
    return g;
}

// ---------------------------------------------------------------------------
// Poisson profile quadrature.
//
// log B(a, r) with B(a, r) = int lambda^a exp(-lambda - r^2/(4 lambda))
// dlambda/lambda, computed as int exp(g(u)) du after lambda = e^u. The
// integrand decays at least single-exponentially on both sides; trapezoid in
// u converges geometrically in 1/h for this analytic integrand.
// ---------------------------------------------------------------------------

namespace {

struct LogIntegrand {
    double a, q; // q = r^2/4
    double operator()(double u) const {
        const double tail = q == 0.0 ? 0.0 : q * std::exp(-u);
        return a * u - std::exp(u) - tail;
    }
};

double log_trapezoid(const LogIntegrand& g, double ulo, double uhi, double gmax, double h) {
    const int n = (int)std::ceil((uhi - ulo) / h);
    const double step = (uhi - ulo) / n;
    double s = 0.5 * (std::exp(g(ulo) - gmax) + std::exp(g(uhi) - gmax));
    for (int i = 1; i < n; ++i) s += std::exp(g(ulo + step * i) - gmax);
    return gmax + std::log(s * step);
}

// Returns log of the integral; throws if two refinements still disagree.
double log_bessel_integral(double a, double r) {
    const LogIntegrand g{a, 0.25 * r * r};
    // Peak of the exponent: a - e^u + q e^{-u} = 0.
    double vstar = 0.5 * (a + std::sqrt(a * a + 4.0 * g.q));
    if (!(vstar > 0.0)) vstar = 1e-8; // a <= 0 with r = 0 never occurs here
    double ustar = std::log(vstar);
    const double gmax = g(ustar);
    double ulo = ustar, uhi = ustar;
    while (g(ulo) > gmax - 120.0) ulo -= 2.0;
    while (g(uhi) > gmax - 120.0) uhi += 2.0;

    // Step scaled to the peak width so large-r (narrow Gaussian) cases keep a
    // fixed number of nodes per width.
    const double width = 1.0 / std::sqrt(std::exp(ustar) + (g.q == 0.0 ? 0.0 : g.q * std::exp(-ustar)));
    double h = std::min(0.25, 0.35 * width);
    double prev = log_trapezoid(g, ulo, uhi, gmax, h);
    for (int ref = 0; ref < 3; ++ref) {
        h *= 0.5;
        const double cur = log_trapezoid(g, ulo, uhi, gmax, h);
        if (std::fabs(cur - prev) <= 1e-12 * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    throw std::runtime_error("build_poisson_profile: quadrature non-convergence");
}

} // namespace

double PoissonProfile::value(double r) const {
    if (exact_exp_) return std::exp(-r);
    if (r == 0.0) return 1.0;
    const double lg = log_bessel_integral(0.5 * s_, r) - log_norm_;
    return lg < -700.0 ? 0.0 : std::exp(lg);
}

double PoissonProfile::deriv(double r) const {
    if (exact_exp_) return -std::exp(-r);
    if (r == 0.0) throw std::invalid_argument("PoissonProfile::deriv: r must be positive");
    const double lg = log_bessel_integral(0.5 * s_ - 1.0, r) - log_norm_;
    return lg < -690.0 ? 0.0 : -0.5 * r * std::exp(lg);
}

double PoissonProfile::second_deriv(double r) const {
    if (exact_exp_) return std::exp(-r);
    if (r == 0.0) throw std::invalid_argument("PoissonProfile::second_deriv: r must be positive");
    const double l1 = log_bessel_integral(0.5 * s_ - 1.0, r) - log_norm_;
    const double l2 = log_bessel_integral(0.5 * s_ - 2.0, r) - log_norm_;
    const double t1 = l1 < -690.0 ? 0.0 : -0.5 * std::exp(l1);
    const double t2 = l2 < -690.0 ? 0.0 : 0.25 * r * r * std::exp(l2);
    return t1 + t2;
}

double PoissonProfile::ode_residual(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("PoissonProfile::ode_residual: r must be positive");
    return second_deriv(r) + (1.0 - s_) / r * deriv(r) - value(r);
}

PoissonProfile build_poisson_profile(double s) {
    if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("build_poisson_profile: s must be in (0,2)");
    PoissonProfile p;
    p.s_ = s;
    if (s == 1.0) {
        p.exact_exp_ = true;
        p.d_ = 1.0;
        return p;
    }
    p.exact_exp_ = false;
    p.log_norm_ = log_bessel_integral(0.5 * s, 0.0);

    // d_s from the small-r asymptotics of q(r) = -r^{1-s} phi'(r) by Richardson
    // extrapolation; the correction exponents of q are 2-s, 2, 4-s, ...
    const double exps[3] = {2.0 - s, 2.0, 4.0 - s};
    double q[5];
    const double r0 = 0.05;
    for (int j = 0; j < 5; ++j) {
        const double r = r0 / (double)(1 << j);
        q[j] = -std::pow(r, 1.0 - s) * p.deriv(r);
    }
    int len = 5;
    for (double e : exps) {
        const double w = std::pow(2.0, e);
        for (int j = 0; j + 1 < len; ++j) q[j] = (w * q[j + 1] - q[j]) / (w - 1.0);
        --len;
    }
    p.d_ = q[0];
    if (!(p.d_ > 0.0) || !std::isfinite(p.d_))
        throw std::runtime_error("build_poisson_profile: Neumann constant extraction failed");

    // Internal constant of the lambda-representation is fixed by the profile
    // ODE itself; refuse to hand out a profile that does not satisfy it.
    for (double r : {0.05, 0.4, 1.0, 3.0, 11.0}) {
        if (std::fabs(p.ode_residual(r)) > 1e-8)
            throw std::runtime_error("build_poisson_profile: profile ODE residual above 1e-8");
    }
    return p;
}

} // namespace hx
