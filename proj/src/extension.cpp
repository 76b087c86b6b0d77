#include "hx/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hx/parallel.hpp"

namespace hx {

TGrid TGrid::geometric(double tmin, double tmax, int levels) {
    if (!(tmin > 0.0 && tmax > tmin) || levels < 4) throw std::invalid_argument("TGrid: bad parameters");
    TGrid g;
    g.t.resize(levels);
    const double rho = std::pow(tmax / tmin, 1.0 / (levels - 1));
    for (int j = 0; j < levels; ++j) g.t[j] = tmin * std::pow(rho, (double)j);
    g.t.back() = tmax;
    // Composite quadratic (nonuniform Simpson) weights; exact for constants,
    // so the indicator integral t_M - t_1 is reproduced to roundoff. Positive
    // for any node ratio below 2.
    g.w.assign((std::size_t)levels, 0.0);
    int j = 0;
    for (; j + 2 < levels; j += 2) {
        const double h1 = g.t[(std::size_t)j + 1] - g.t[(std::size_t)j];
        const double h2 = g.t[(std::size_t)j + 2] - g.t[(std::size_t)j + 1];
        g.w[(std::size_t)j] += (h1 + h2) * (2.0 * h1 - h2) / (6.0 * h1);
        g.w[(std::size_t)j + 1] += (h1 + h2) * (h1 + h2) * (h1 + h2) / (6.0 * h1 * h2);
        g.w[(std::size_t)j + 2] += (h1 + h2) * (2.0 * h2 - h1) / (6.0 * h2);
    }
    if (j + 1 < levels) { // odd interval count: close with a trapezoid
        const double h = g.t[(std::size_t)levels - 1] - g.t[(std::size_t)levels - 2];
        g.w[(std::size_t)levels - 2] += 0.5 * h;
        g.w[(std::size_t)levels - 1] += 0.5 * h;
    }
    return g;
}

TGrid TGrid::standard(const GridSpec& spec, int levels) {
    // t_min sits a factor 512 below half a grid cell: the bulk integrands of
    // the commutator identities carry a boundary layer at t ~ 1/|xi_max| whose
    // mass the quadrature has to resolve, not extrapolate from two samples.
    const double L = spec.period;
    const double tmin = L / (2.0 * spec.points) / 512.0;
    const double tmax = L * std::log(1e8) / (2.0 * M_PI);
    return geometric(tmin, tmax, levels);
}

// ---------------------------------------------------------------------------

namespace {

// |xi| per coefficient index.
std::vector<double> xi_magnitudes(const GridSpec& spec) {
    std::vector<double> m(spec.size());
    const int N = spec.points;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (spec.dim == 1) {
            m[i] = std::fabs(spec.freq(spec.wavenumber((int)i)));
        } else {
            const double x1 = spec.freq(spec.wavenumber((int)(i / (std::size_t)N)));
            const double x2 = spec.freq(spec.wavenumber((int)(i % (std::size_t)N)));
            m[i] = std::sqrt(x1 * x1 + x2 * x2);
        }
    }
    return m;
}

} // namespace

ExtensionOperator::ExtensionOperator(const GridSpec& spec, double s, TGrid tg)
    : spec_(spec), s_(s), tg_(std::move(tg)), prof_(build_poisson_profile(s)) {
    xi_abs_ = xi_magnitudes(spec_);

    // Unique |xi| values; quadrature runs once per (level, unique value).
    std::vector<double> uniq = xi_abs_;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::map<double, int> pos;
    for (int u = 0; u < (int)uniq.size(); ++u) pos[uniq[u]] = u;
    std::vector<int> idx(xi_abs_.size());
    for (std::size_t i = 0; i < xi_abs_.size(); ++i) idx[i] = pos[xi_abs_[i]];

    const int M = tg_.levels();
    val_.assign(M, std::vector<double>(spec_.size()));
    der_.assign(M, std::vector<double>(spec_.size()));
    std::vector<std::vector<double>> uval(M, std::vector<double>(uniq.size()));
    std::vector<std::vector<double>> uder(M, std::vector<double>(uniq.size()));
    par::for_each_dynamic((std::size_t)M * uniq.size(), [&](std::size_t w) {
        const int j = (int)(w / uniq.size());
        const std::size_t u = w % uniq.size();
        const double r = tg_.t[j] * uniq[u];
        if (uniq[u] == 0.0) {
            uval[j][u] = 1.0; // mean passes through, phi(0) = 1
            uder[j][u] = 0.0;
        } else {
            uval[j][u] = prof_.value(r);
            uder[j][u] = prof_.deriv(r);
        }
    });
    for (int j = 0; j < M; ++j)
        for (std::size_t i = 0; i < xi_abs_.size(); ++i) {
            val_[j][i] = uval[j][(std::size_t)idx[i]];
            der_[j][i] = uder[j][(std::size_t)idx[i]];
        }
}

struct ExtensionField::Impl {
    std::shared_ptr<const ExtensionOperator> op;
    GridFunction source;
    SpectralField fhat;
    double source_scale = 0.0; // imaginary-residue reference for deep slices

    // Lazy families: 0 value, 1 dt, 2+a dx_a, 4+(ab packed) dxx, 7+a dxt_a.
    static constexpr int n_families = 9;
    mutable std::vector<GridFunction> fam[n_families];
    mutable std::once_flag flag[n_families];

    static int dxx_family(int a, int b) { return 4 + a + b; } // 00->4, 01/10->5, 11->6

    void materialize(int family) const {
        const GridSpec& spec = op->grid();
        const int N = spec.points;
        const int M = op->tgrid().levels();
        std::vector<GridFunction> out((std::size_t)M);
        // Parallelism lives inside the transforms; loop levels serially to
        // keep memory bounded and results order-independent.
        for (int j = 0; j < M; ++j) {
            SpectralField c = fhat;
            const auto& pv = op->value_table(j);
            const auto& pd = op->deriv_table(j);
            for (std::size_t i = 0; i < c.size(); ++i) {
                int k1, k2 = 0;
                if (spec.dim == 1) {
                    k1 = spec.wavenumber((int)i);
                } else {
                    k1 = spec.wavenumber((int)(i / (std::size_t)N));
                    k2 = spec.wavenumber((int)(i % (std::size_t)N));
                }
                const bool zero_mode = k1 == 0 && k2 == 0;
                const double x1 = spec.freq(k1), x2 = spec.freq(k2);
                const double mag = std::sqrt(x1 * x1 + x2 * x2);
                std::complex<double> f = 0.0;
                switch (family) {
                    case 0: f = pv[i]; break;
                    case 1: f = zero_mode ? 0.0 : mag * pd[i]; break;
                    case 2:
                    case 3: {
                        const int a = family - 2;
                        const int ka = a == 0 ? k1 : k2;
                        f = ka == -N / 2 ? 0.0 : std::complex<double>(0.0, (a == 0 ? x1 : x2) * pv[i]);
                        break;
                    }
                    case 4: f = k1 == -N / 2 ? 0.0 : -x1 * x1 * pv[i]; break;
                    case 5: f = (k1 == -N / 2 || k2 == -N / 2) ? 0.0 : -x1 * x2 * pv[i]; break;
                    case 6: f = k2 == -N / 2 ? 0.0 : -x2 * x2 * pv[i]; break;
                    case 7:
                    case 8: {
                        const int a = family - 7;
                        const int ka = a == 0 ? k1 : k2;
                        if (zero_mode || ka == -N / 2)
                            f = 0.0;
                        else
                            f = std::complex<double>(0.0, (a == 0 ? x1 : x2) * mag * pd[i]);
                        break;
                    }
                }
                c[i] *= f;
            }
            out[(std::size_t)j] = inverse_transform(c, source_scale);
        }
        fam[family] = std::move(out);
    }

    const GridFunction& get(int family, int j) const {
        std::call_once(flag[family], [&] { materialize(family); });
        return fam[family][(std::size_t)j];
    }
};

ExtensionField ExtensionOperator::extend(const GridFunction& f) const {
    if (f.spec() != spec_) throw std::invalid_argument("ExtensionOperator::extend: grid spec mismatch");
    // Tail check: the slowest *nonzero* mode must decay below tolerance at
    // t_max (zero-mean handling is the caller's concern; the mean is t-flat).
    const double ximin = 2.0 * M_PI / spec_.period;
    if (prof_.value(tg_.t.back() * ximin) > 1e-6)
        throw std::invalid_argument("ExtensionOperator: t_max too small for the declared tail tolerance");
    std::shared_ptr<const ExtensionOperator> self = weak_from_this().lock();
    if (!self) self = std::make_shared<const ExtensionOperator>(*this); // stack-held operator
    ExtensionField E;
    auto impl = std::make_shared<ExtensionField::Impl>();
    impl->op = std::move(self);
    impl->source = f;
    impl->fhat = forward_transform(f);
    impl->source_scale = max_abs(f);
    E.impl_ = std::move(impl);
    return E;
}

const GridFunction& ExtensionField::source() const { return impl_->source; }
double ExtensionField::order() const { return impl_->op->order(); }
const TGrid& ExtensionField::tgrid() const { return impl_->op->tgrid(); }
const GridSpec& ExtensionField::grid() const { return impl_->op->grid(); }
int ExtensionField::levels() const { return impl_->op->tgrid().levels(); }
std::shared_ptr<const ExtensionOperator> ExtensionField::op() const { return impl_->op; }

static void check_level_axis(const ExtensionField& E, int j, int axis) {
    if (j < 0 || j >= E.levels()) throw std::invalid_argument("ExtensionField: level out of range");
    if (axis < 0 || axis >= E.grid().dim) throw std::invalid_argument("ExtensionField: axis out of range");
}

const GridFunction& ExtensionField::slice(int j) const {
    check_level_axis(*this, j, 0);
    return impl_->get(0, j);
}
const GridFunction& ExtensionField::dt(int j) const {
    check_level_axis(*this, j, 0);
    return impl_->get(1, j);
}
const GridFunction& ExtensionField::dx(int j, int axis) const {
    check_level_axis(*this, j, axis);
    return impl_->get(2 + axis, j);
}
const GridFunction& ExtensionField::dxx(int j, int a, int b) const {
    check_level_axis(*this, j, a);
    check_level_axis(*this, j, b);
    return impl_->get(Impl::dxx_family(a, b), j);
}
const GridFunction& ExtensionField::dxt(int j, int axis) const {
    check_level_axis(*this, j, axis);
    return impl_->get(7 + axis, j);
}

ExtensionField extend(const GridFunction& f, double s, const TGrid& tg) {
    return ExtensionOperator(f.spec(), s, tg).extend(f);
}

double pde_residual(const ExtensionField& E) {
    const auto op = E.op();
    const GridSpec& spec = E.grid();
    const SpectralField fhat = forward_transform(E.source());
    double fmax = 0.0;
    for (std::size_t i = 1; i < fhat.size(); ++i) fmax = std::max(fmax, std::abs(fhat[i]));
    if (fmax == 0.0) return 0.0;

    const std::vector<double> xi = [&] {
        std::vector<double> m(spec.size());
        const int N = spec.points;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (spec.dim == 1) {
                m[i] = std::fabs(spec.freq(spec.wavenumber((int)i)));
            } else {
                const double x1 = spec.freq(spec.wavenumber((int)(i / (std::size_t)N)));
                const double x2 = spec.freq(spec.wavenumber((int)(i % (std::size_t)N)));
                m[i] = std::sqrt(x1 * x1 + x2 * x2);
            }
        }
        return m;
    }();

    // Unique (|xi| != 0) with max spectral weight, then residual per level.
    std::map<double, double> weight;
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (xi[i] > 0.0) {
            double& w = weight[xi[i]];
            w = std::max(w, std::abs(fhat[i]) / fmax);
        }
    std::vector<std::pair<double, double>> uw(weight.begin(), weight.end());
    const int M = E.levels();
    const auto& prof = op->profile();
    std::vector<double> worst(uw.size(), 0.0);
    par::for_each_dynamic(uw.size(), [&](std::size_t u) {
        double loc = 0.0;
        for (int j = 0; j < M; ++j) {
            const double r = E.tgrid().t[j] * uw[u].first;
            if (r > 60.0) continue; // profile and derivatives all below 1e-26
            loc = std::max(loc, std::fabs(prof.ode_residual(r)) * uw[u].second);
        }
        worst[u] = loc;
    });
    double m = 0.0;
    for (double v : worst) m = std::max(m, v);
    return m;
}

GridFunction neumann_trace(const ExtensionField& E) {
    const double s = E.order();
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("neumann_trace: s must be in (0,1]");
    const double t1 = E.tgrid().t.front();
    const double ds = E.op()->profile().neumann_constant();
    GridFunction g = E.dt(0);
    const double scale = -std::pow(t1, 1.0 - s) / ds;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= scale;
    return g;
}

BulkIntegral bulk_integral(const TGrid& tg, const std::function<GridFunction(int)>& integrand, double tail_tol) {
    const int M = tg.levels();
    std::vector<double> I((std::size_t)M);
    for (int j = 0; j < M; ++j) I[(std::size_t)j] = integral(integrand(j));

    BulkIntegral out;
    out.interior = par::pairwise_sum(std::size_t{0}, (std::size_t)M,
                                     [&](std::size_t j) { return tg.w[j] * I[j]; });

    // Left tail [0, t_1]: fit I ~ a t^beta from the first two levels.
    if (I[0] != 0.0 && I[1] != 0.0 && I[0] * I[1] > 0.0) {
        const double beta = std::log(I[1] / I[0]) / std::log(tg.t[1] / tg.t[0]);
        if (beta > -0.9 && beta < 8.0) out.left = I[0] * tg.t[0] / (beta + 1.0);
    }
    out.tail_estimate = std::fabs(I[(std::size_t)M - 1]) * tg.t[(std::size_t)M - 1];

    const double scale = std::max({std::fabs(out.interior), std::fabs(out.left), 1e-300});
    if (out.tail_estimate > tail_tol * scale)
        throw std::runtime_error("bulk_integral: integrand at t_max above the tail tolerance");
    return out;
}

SampleBlock reflected_extension(const GridFunction& f, const TGrid& tg) {
    ExtensionField E = extend(f, 1.0, tg);
    const int M = tg.levels();
    SampleBlock b;
    b.spec = f.spec();
    b.t.resize(2 * (std::size_t)M);
    b.tw.resize(2 * (std::size_t)M);
    b.slices.resize(2 * (std::size_t)M);
    for (int j = 0; j < M; ++j) {
        // Negative side mirrors the positive one; even by construction.
        b.t[(std::size_t)(M - 1 - j)] = -tg.t[j];
        b.tw[(std::size_t)(M - 1 - j)] = tg.w[j];
        b.slices[(std::size_t)(M - 1 - j)] = E.slice(j);
        b.t[(std::size_t)(M + j)] = tg.t[j];
        b.tw[(std::size_t)(M + j)] = tg.w[j];
        b.slices[(std::size_t)(M + j)] = E.slice(j);
    }
    return b;
}

double poisson_vs_ball_mean(const GridFunction& f, double t) {
    const GridSpec& spec = f.spec();
    if (!(t > 0.0 && t <= spec.period / 4.0))
        throw std::invalid_argument("poisson_vs_ball_mean: need 0 < t <= L/4");
    Multiplier m;
    m.symbol = [t](const std::array<double, 2>& xi) -> std::complex<double> {
        return std::exp(-t * std::sqrt(xi[0] * xi[0] + xi[1] * xi[1]));
    };
    m.at_zero = 1.0;
    GridFunction P = apply_multiplier(f, m);

    const int N = spec.points;
    const int R = (int)std::floor(t / spec.spacing() + 1e-9);
    double sup = 0.0;
    if (spec.dim == 1) {
        std::vector<double> pre((std::size_t)N + 1, 0.0);
        for (int i = 0; i < N; ++i) pre[(std::size_t)i + 1] = pre[(std::size_t)i] + f[(std::size_t)i];
        auto wrap_sum = [&](int lo, int hi) { // inclusive index range, torus
            double s = 0.0;
            int a = lo, b = hi;
            while (a < 0) { a += N; b += N; }
            if (b < N) return pre[(std::size_t)b + 1] - pre[(std::size_t)a];
            s = pre[(std::size_t)N] - pre[(std::size_t)a];
            s += pre[(std::size_t)(b - N) + 1];
            return s;
        };
        for (int i = 0; i < N; ++i) {
            const double ball = wrap_sum(i - R, i + R) / (double)(2 * R + 1);
            sup = std::max(sup, std::fabs(P[(std::size_t)i] - ball));
        }
    } else {
        std::vector<int> half((std::size_t)R + 1);
        int count = 0;
        for (int dy = -R; dy <= R; ++dy) {
            const int w = (int)std::floor(std::sqrt((double)R * R - (double)dy * dy) + 1e-9);
            half[(std::size_t)std::abs(dy)] = w;
            count += 2 * w + 1;
        }
        std::vector<double> pre((std::size_t)N * (N + 1), 0.0);
        for (int r = 0; r < N; ++r)
            for (int i = 0; i < N; ++i)
                pre[(std::size_t)r * (N + 1) + i + 1] = pre[(std::size_t)r * (N + 1) + i] + f[(std::size_t)r * N + i];
        auto row_sum = [&](int row, int lo, int hi) {
            const double* p = &pre[(std::size_t)((row % N + N) % N) * (N + 1)];
            int a = lo, b = hi;
            while (a < 0) { a += N; b += N; }
            if (b < N) return p[b + 1] - p[a];
            return (p[N] - p[a]) + p[b - N + 1];
        };
        std::vector<double> sups((std::size_t)N, 0.0);
        par::for_each((std::size_t)N, [&](std::size_t r) {
            double loc = 0.0;
            for (int i = 0; i < N; ++i) {
                double s = 0.0;
                for (int dy = -R; dy <= R; ++dy) {
                    const int w = half[(std::size_t)std::abs(dy)];
                    s += row_sum((int)r + dy, i - w, i + w);
                }
                loc = std::max(loc, std::fabs(P[r * (std::size_t)N + (std::size_t)i] - s / count));
            }
            sups[r] = loc;
        });
        for (double v : sups) sup = std::max(sup, v);
    }
    return sup;
}

} // namespace hx
