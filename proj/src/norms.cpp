#include "hx/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hx/parallel.hpp"

namespace hx {

double lp_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return max_abs(f);
    const double s = par::sum(f.size(), [&](std::size_t i) { return std::pow(std::fabs(f[i]), p); });
    return std::pow(f.spec().cell_volume() * s, 1.0 / p);
}

Rearrangement decreasing_rearrangement(const GridFunction& f) {
    Rearrangement r;
    r.cell = f.spec().cell_volume();
    r.values.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r.values[i] = std::fabs(f[i]);
    std::sort(r.values.begin(), r.values.end(), std::greater<double>());
    return r;
}

double lorentz_norm(const GridFunction& f, double p, double q) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("lorentz_norm: p must be in (1,inf)");
    if (!(q >= 1.0)) throw std::invalid_argument("lorentz_norm: q must be in [1,inf]");
    const Rearrangement r = decreasing_rearrangement(f);
    const std::size_t n = r.values.size();
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (r.values[i] == 0.0) break;
            m = std::max(m, r.values[i] * std::pow(r.cell * (double)(i + 1), 1.0 / p));
        }
        return m;
    }
    // Exact integral of (t^{1/p} f*(t))^q dt/t on the step function.
    const double e = q / p;
    double s = 0.0, tpow_lo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double tpow_hi = std::pow(r.cell * (double)(i + 1), e);
        if (r.values[i] != 0.0) s += std::pow(r.values[i], q) * (tpow_hi - tpow_lo);
        tpow_lo = tpow_hi;
    }
    return std::pow(s * p / q, 1.0 / q);
}

// ---------------------------------------------------------------------------
// BMO
// ---------------------------------------------------------------------------

namespace {

int bmo_max_level(int N) {
    int lg = 0;
    while ((1 << lg) < N) ++lg;
    return lg - 2; // sides L/2, ..., 4h
}

std::vector<int> level_starts(int N, int m) {
    std::vector<int> starts;
    for (int dlt : {0, m / 3, 2 * m / 3}) {
        for (int q0 = 0; q0 * m < N; ++q0) starts.push_back((q0 * m + dlt) % N);
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    return starts;
}

double interval_osc(const GridFunction& f, int start, int m) {
    const int N = f.spec().points;
    double sum = 0.0;
    for (int d = 0; d < m; ++d) sum += f[(std::size_t)((start + d) % N)];
    const double mu = sum / m;
    double osc = 0.0;
    for (int d = 0; d < m; ++d) osc += std::fabs(f[(std::size_t)((start + d) % N)] - mu);
    return osc / m;
}

double square_osc(const GridFunction& f, int s1, int s2, int m) {
    const int N = f.spec().points;
    double sum = 0.0;
    for (int d1 = 0; d1 < m; ++d1) {
        const std::size_t row = (std::size_t)((s1 + d1) % N) * N;
        for (int d2 = 0; d2 < m; ++d2) sum += f[row + (std::size_t)((s2 + d2) % N)];
    }
    const double mu = sum / ((double)m * m);
    double osc = 0.0;
    for (int d1 = 0; d1 < m; ++d1) {
        const std::size_t row = (std::size_t)((s1 + d1) % N) * N;
        for (int d2 = 0; d2 < m; ++d2) osc += std::fabs(f[row + (std::size_t)((s2 + d2) % N)] - mu);
    }
    return osc / ((double)m * m);
}

} // namespace

double bmo_seminorm(const GridFunction& f) {
    const int N = f.spec().points;
    const int J = bmo_max_level(N);
    double best = 0.0;
    for (int j = 1; j <= J; ++j) {
        const int m = N >> j;
        const std::vector<int> starts = level_starts(N, m);
        if (f.spec().dim == 1) {
            best = std::max(best, par::max(starts.size(), [&](std::size_t i) {
                                return interval_osc(f, starts[i], m);
                            }));
        } else {
            best = std::max(best, par::max(starts.size() * starts.size(), [&](std::size_t i) {
                                const int s1 = starts[i / starts.size()];
                                const int s2 = starts[i % starts.size()];
                                return square_osc(f, s1, s2, m);
                            }));
        }
    }
    return best;
}

double bmo_seminorm(const SampleBlock& b) {
    const GridSpec& spec = b.spec;
    const int N = spec.points;
    const double h = spec.spacing();
    const int J = bmo_max_level(N);
    const double tcap = spec.period / 4.0;
    const int L = (int)b.t.size();
    double best = 0.0;
    for (int j = 1; j <= J; ++j) {
        const int m = N >> j;
        const double side = m * h;
        const std::vector<int> starts = level_starts(N, m);
        // t-interval centers on a half-side lattice spanning [-tcap, tcap].
        std::vector<double> centers;
        for (double tc = 0.0; tc <= tcap + 0.25 * side; tc += 0.5 * side) {
            centers.push_back(tc);
            if (tc > 0.0) centers.push_back(-tc);
        }
        // Level ranges per center.
        struct Range { int lo, hi; }; // [lo, hi)
        std::vector<Range> ranges(centers.size());
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double lo = centers[c] - 0.5 * side, hi = centers[c] + 0.5 * side;
            int a = 0;
            while (a < L && b.t[(std::size_t)a] < lo) ++a;
            int e = a;
            while (e < L && b.t[(std::size_t)e] <= hi) ++e;
            ranges[c] = {a, e};
        }
        const std::size_t nx = spec.dim == 1 ? starts.size() : starts.size() * starts.size();
        best = std::max(best, par::max(nx * centers.size(), [&](std::size_t w) {
            const std::size_t xi = w / centers.size();
            const std::size_t c = w % centers.size();
            const Range rg = ranges[c];
            if (rg.hi <= rg.lo) return 0.0;
            double wsum = 0.0, acc = 0.0;
            auto cells = [&](auto&& visit) {
                for (int lev = rg.lo; lev < rg.hi; ++lev) {
                    const double wt = b.tw[(std::size_t)lev];
                    const GridFunction& sl = b.slices[(std::size_t)lev];
                    if (spec.dim == 1) {
                        const int s0 = starts[xi];
                        for (int d = 0; d < m; ++d) visit(wt, sl[(std::size_t)((s0 + d) % N)]);
                    } else {
                        const int s1 = starts[xi / starts.size()];
                        const int s2 = starts[xi % starts.size()];
                        for (int d1 = 0; d1 < m; ++d1) {
                            const std::size_t row = (std::size_t)((s1 + d1) % N) * N;
                            for (int d2 = 0; d2 < m; ++d2) visit(wt, sl[row + (std::size_t)((s2 + d2) % N)]);
                        }
                    }
                }
            };
            cells([&](double wt, double v) { wsum += wt; acc += wt * v; });
            if (wsum <= 0.0) return 0.0;
            const double mu = acc / wsum;
            double osc = 0.0;
            cells([&](double wt, double v) { osc += wt * std::fabs(v - mu); });
            return osc / wsum;
        }));
    }
    return best;
}

// ---------------------------------------------------------------------------

double holder_seminorm(const GridFunction& f, double nu) {
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("holder_seminorm: nu must be in (0,1]");
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    const double h = spec.spacing();
    const int R = N / 4;
    if (spec.dim == 1) {
        return par::max((std::size_t)R, [&](std::size_t di) {
            const int d = (int)di + 1;
            const double w = std::pow(d * h, -nu);
            double loc = 0.0;
            for (int i = 0; i < N; ++i)
                loc = std::max(loc, std::fabs(f[(std::size_t)i] - f[(std::size_t)((i + d) % N)]));
            return loc * w;
        });
    }
    // Offsets in the closed half-plane (d1 > 0, or d1 == 0 and d2 > 0), with
    // torus distance <= L/4; weight table precomputed per offset.
    struct Off { int d1, d2; double w; };
    std::vector<Off> offs;
    for (int d1 = 0; d1 <= R; ++d1) {
        for (int d2 = (d1 == 0 ? 1 : -R); d2 <= R; ++d2) {
            const double dist = h * std::sqrt((double)d1 * d1 + (double)d2 * d2);
            if (dist <= spec.period / 4.0 + 1e-12) offs.push_back({d1, d2, std::pow(dist, -nu)});
        }
    }
    return par::max(offs.size(), [&](std::size_t oi) {
        const Off o = offs[oi];
        double loc = 0.0;
        for (int i1 = 0; i1 < N; ++i1) {
            const std::size_t ra = (std::size_t)i1 * N;
            const std::size_t rb = (std::size_t)((i1 + o.d1) % N) * N;
            for (int i2 = 0; i2 < N; ++i2)
                loc = std::max(loc, std::fabs(f[ra + (std::size_t)i2] - f[rb + (std::size_t)((i2 + o.d2 + N) % N)]));
        }
        return loc * o.w;
    });
}

double gagliardo_seminorm(const GridFunction& f, double nu, double p) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("gagliardo_seminorm: nu must be in (0,1)");
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("gagliardo_seminorm: p must be finite, >= 1");
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    if ((spec.dim == 1 && N > 4096) || (spec.dim == 2 && N > 64))
        throw std::invalid_argument("gagliardo_seminorm: size guard (n=1: N<=4096, n=2: N<=64)");
    const double h = spec.spacing();
    const double kexp = spec.dim + nu * p;
    const bool p2 = p == 2.0;

    if (spec.dim == 1) {
        std::vector<double> partial((std::size_t)N - 1);
        par::for_each((std::size_t)N - 1, [&](std::size_t di) {
            const int d = (int)di + 1;
            const double dist = h * std::min(d, N - d);
            const double K = std::pow(dist, -kexp);
            const double S = par::pairwise_sum(std::size_t{0}, (std::size_t)N, [&](std::size_t i) {
                const double df = f[i] - f[(i + (std::size_t)d) % (std::size_t)N];
                return p2 ? df * df : std::pow(std::fabs(df), p);
            });
            partial[di] = K * S;
        });
        const double total = par::pairwise_sum(std::size_t{0}, partial.size(), [&](std::size_t i) { return partial[i]; });
        return std::pow(h * h * total, 1.0 / p);
    }

    const std::size_t NN = (std::size_t)N * N;
    std::vector<double> partial(NN, 0.0);
    par::for_each_dynamic(NN, [&](std::size_t o) {
        const int d1 = (int)(o / (std::size_t)N);
        const int d2 = (int)(o % (std::size_t)N);
        if (d1 == 0 && d2 == 0) return;
        const double dx = h * std::min(d1, N - d1);
        const double dy = h * std::min(d2, N - d2);
        const double K = std::pow(dx * dx + dy * dy, -0.5 * kexp);
        const double S = par::pairwise_sum(std::size_t{0}, NN, [&](std::size_t i) {
            const int i1 = (int)(i / (std::size_t)N), i2 = (int)(i % (std::size_t)N);
            const double df = f[i] - f[(std::size_t)((i1 + d1) % N) * N + (std::size_t)((i2 + d2) % N)];
            return p2 ? df * df : std::pow(std::fabs(df), p);
        });
        partial[o] = K * S;
    });
    const double total = par::pairwise_sum(std::size_t{0}, NN, [&](std::size_t i) { return partial[i]; });
    return std::pow(h * h * h * h * total, 1.0 / p);
}

// ---------------------------------------------------------------------------

GridFunction maximal_function(const GridFunction& f) {
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    const int R = N / 4;
    GridFunction out = GridFunction::zeros(spec);
    if (spec.dim == 1) {
        std::vector<double> pre((std::size_t)N + 1, 0.0);
        for (int i = 0; i < N; ++i) pre[(std::size_t)i + 1] = pre[(std::size_t)i] + std::fabs(f[(std::size_t)i]);
        auto wrap = [&](int lo, int hi) {
            while (lo < 0) { lo += N; hi += N; }
            if (hi < N) return pre[(std::size_t)hi + 1] - pre[(std::size_t)lo];
            return (pre[(std::size_t)N] - pre[(std::size_t)lo]) + pre[(std::size_t)(hi - N) + 1];
        };
        par::for_each((std::size_t)N, [&](std::size_t i) {
            double best = std::fabs(f[i]);
            for (int r = 1; r <= R; ++r)
                best = std::max(best, wrap((int)i - r, (int)i + r) / (double)(2 * r + 1));
            out[i] = best;
        });
        return out;
    }
    std::vector<double> pre((std::size_t)N * (N + 1), 0.0);
    for (int r = 0; r < N; ++r)
        for (int i = 0; i < N; ++i)
            pre[(std::size_t)r * (N + 1) + i + 1] = pre[(std::size_t)r * (N + 1) + i] + std::fabs(f[(std::size_t)r * N + i]);
    // Half-widths and cell counts per radius.
    std::vector<std::vector<int>> half((std::size_t)R + 1);
    std::vector<int> count((std::size_t)R + 1, 1);
    for (int r = 1; r <= R; ++r) {
        half[(std::size_t)r].resize((std::size_t)r + 1);
        int c = 0;
        for (int dy = -r; dy <= r; ++dy) {
            const int w = (int)std::floor(std::sqrt((double)r * r - (double)dy * dy) + 1e-9);
            half[(std::size_t)r][(std::size_t)std::abs(dy)] = w;
            c += 2 * w + 1;
        }
        count[(std::size_t)r] = c;
    }
    auto row_sum = [&](int row, int lo, int hi) {
        const double* p = &pre[(std::size_t)((row % N + N) % N) * (N + 1)];
        while (lo < 0) { lo += N; hi += N; }
        if (hi < N) return p[hi + 1] - p[lo];
        return (p[N] - p[lo]) + p[hi - N + 1];
    };
    par::for_each((std::size_t)N, [&](std::size_t r0) {
        for (int i = 0; i < N; ++i) {
            const std::size_t idx = r0 * (std::size_t)N + (std::size_t)i;
            double best = std::fabs(f[idx]);
            for (int r = 1; r <= R; ++r) {
                double s = 0.0;
                for (int dy = -r; dy <= r; ++dy)
                    s += row_sum((int)r0 + dy, i - half[(std::size_t)r][(std::size_t)std::abs(dy)],
                                 i + half[(std::size_t)r][(std::size_t)std::abs(dy)]);
                best = std::max(best, s / count[(std::size_t)r]);
            }
            out[idx] = best;
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Cone and tent functionals
// ---------------------------------------------------------------------------

namespace {

void check_square_admissible(DerivSelector sel, double nu, double s) {
    switch (sel) {
        case DerivSelector::Dt:
            if (!(nu >= 0.0 && nu < s)) throw std::invalid_argument("square_function: Dt needs nu in [0,s)");
            break;
        case DerivSelector::GradX:
            if (!(nu >= 0.0 && nu < 1.0)) throw std::invalid_argument("square_function: GradX needs nu in [0,1)");
            break;
        case DerivSelector::GradXGrad:
            if (!(nu > 0.0 && nu < 1.0 + s))
                throw std::invalid_argument("square_function: GradXGrad needs nu in (0,1+s)");
            break;
    }
}

// Squared derivative magnitude per level.
GridFunction deriv_sq(const ExtensionField& E, DerivSelector sel, int j) {
    const GridSpec& spec = E.grid();
    GridFunction out = GridFunction::zeros(spec);
    auto add_sq = [&](const GridFunction& g) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i] * g[i];
    };
    switch (sel) {
        case DerivSelector::Dt: add_sq(E.dt(j)); break;
        case DerivSelector::GradX:
            for (int a = 0; a < spec.dim; ++a) add_sq(E.dx(j, a));
            break;
        case DerivSelector::GradXGrad:
            for (int a = 0; a < spec.dim; ++a) {
                add_sq(E.dxt(j, a));
                for (int b = 0; b < spec.dim; ++b) add_sq(E.dxx(j, a, b));
            }
            break;
    }
    return out;
}

// Prefix sums with wrap helpers (1d array of length N).
struct Prefix1D {
    std::vector<double> p;
    int N;
    explicit Prefix1D(const GridFunction& f) : N(f.spec().points) {
        p.assign((std::size_t)N + 1, 0.0);
        for (int i = 0; i < N; ++i) p[(std::size_t)i + 1] = p[(std::size_t)i] + f[(std::size_t)i];
    }
    double window(int center, int rad) const { // |y - center| <= rad
        int lo = center - rad, hi = center + rad;
        if (2 * rad + 1 >= N) return p[(std::size_t)N];
        while (lo < 0) { lo += N; hi += N; }
        if (hi < N) return p[(std::size_t)hi + 1] - p[(std::size_t)lo];
        return (p[(std::size_t)N] - p[(std::size_t)lo]) + p[(std::size_t)(hi - N) + 1];
    }
};

struct PrefixRows {
    std::vector<double> p;
    int N;
    explicit PrefixRows(const GridFunction& f) : N(f.spec().points) {
        p.assign((std::size_t)N * (N + 1), 0.0);
        for (int r = 0; r < N; ++r)
            for (int i = 0; i < N; ++i)
                p[(std::size_t)r * (N + 1) + i + 1] = p[(std::size_t)r * (N + 1) + i] + f[(std::size_t)r * N + i];
    }
    double row_window(int row, int center, int rad) const {
        const double* q = &p[(std::size_t)((row % N + N) % N) * (N + 1)];
        int lo = center - rad, hi = center + rad;
        if (2 * rad + 1 >= N) return q[N];
        while (lo < 0) { lo += N; hi += N; }
        if (hi < N) return q[hi + 1] - q[lo];
        return (q[N] - q[lo]) + q[hi - N + 1];
    }
};

// Largest integer d with d*h < t (strict cone inequality).
int strict_radius(double t, double h) {
    int d = (int)std::floor(t / h);
    if ((double)d * h >= t) --d;
    return d;
}

} // namespace

GridFunction square_function(const ExtensionField& E, DerivSelector sel, double nu) {
    check_square_admissible(sel, nu, E.order());
    const GridSpec& spec = E.grid();
    const TGrid& tg = E.tgrid();
    const double h = spec.spacing();
    const double n = (double)spec.dim;
    const double power = sel == DerivSelector::GradXGrad ? 3.0 : 1.0;
    const double tcap = spec.period / 4.0;

    std::vector<double> acc(spec.size(), 0.0);
    for (int j = 0; j < tg.levels(); ++j) {
        const double t = tg.t[(std::size_t)j];
        if (t > tcap) break;
        // Sub-cell cones are empty: a cone of radius t < h/2 covers no cell,
        // which keeps the discrete sum refinement-convergent for the
        // t^{1-2nu-n} weights.
        if (t < 0.5 * h) continue;
        const int rad = std::max(0, strict_radius(t, h));
        const GridFunction dsq = deriv_sq(E, sel, j);
        const double wt = std::pow(t, power - 2.0 * nu - n) * tg.w[(std::size_t)j] * spec.cell_volume();
        if (spec.dim == 1) {
            Prefix1D pre(dsq);
            par::for_each(spec.size(), [&](std::size_t i) { acc[i] += wt * pre.window((int)i, rad); });
        } else {
            PrefixRows pre(dsq);
            const int N = spec.points;
            std::vector<int> half((std::size_t)rad + 1);
            for (int dy = 0; dy <= rad; ++dy)
                half[(std::size_t)dy] = (int)std::floor(std::sqrt(std::max(0.0, (double)rad * rad - (double)dy * dy)) + 1e-9);
            par::for_each((std::size_t)N, [&](std::size_t r0) {
                for (int i = 0; i < N; ++i) {
                    double s = 0.0;
                    for (int dy = -rad; dy <= rad; ++dy)
                        s += pre.row_window((int)r0 + dy, i, half[(std::size_t)std::abs(dy)]);
                    acc[r0 * (std::size_t)N + (std::size_t)i] += wt * s;
                }
            });
        }
    }
    GridFunction out = GridFunction::zeros(spec);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(std::max(0.0, acc[i]));
    return out;
}

namespace {

// Per-level |grad_{x,t} F|^2 with the tent weight t * w_j * h^n baked in.
struct TentTables {
    std::vector<Prefix1D> pre1;
    std::vector<PrefixRows> pre2;
    std::vector<double> weight;
    std::vector<double> tlev;
};

TentTables tent_tables(const ExtensionField& E) {
    TentTables T;
    const GridSpec& spec = E.grid();
    const TGrid& tg = E.tgrid();
    for (int j = 0; j < tg.levels(); ++j) {
        if (tg.t[(std::size_t)j] > spec.period / 4.0) break;
        GridFunction gsq = deriv_sq(E, DerivSelector::GradX, j);
        const GridFunction& dt = E.dt(j);
        for (std::size_t i = 0; i < gsq.size(); ++i) gsq[i] += dt[i] * dt[i];
        if (spec.dim == 1)
            T.pre1.emplace_back(gsq);
        else
            T.pre2.emplace_back(gsq);
        T.weight.push_back(tg.t[(std::size_t)j] * tg.w[(std::size_t)j] * spec.cell_volume());
        T.tlev.push_back(tg.t[(std::size_t)j]);
    }
    return T;
}

double tent_energy_tab(const GridSpec& spec, const TentTables& T, std::size_t center, double radius) {
    const double h = spec.spacing();
    const int N = spec.points;
    double e = 0.0;
    for (std::size_t j = 0; j < T.tlev.size(); ++j) {
        const double room = radius - T.tlev[j];
        if (room <= 0.0) break;
        const int rad = strict_radius(room, h);
        if (rad < 0) continue;
        if (spec.dim == 1) {
            e += T.weight[j] * T.pre1[j].window((int)center, rad);
        } else {
            const int c1 = (int)(center / (std::size_t)N), c2 = (int)(center % (std::size_t)N);
            double s = 0.0;
            for (int dy = -rad; dy <= rad; ++dy) {
                const int w = (int)std::floor(std::sqrt(std::max(0.0, (double)rad * rad - (double)dy * dy)) + 1e-9);
                s += T.pre2[j].row_window(c1 + dy, c2, w);
            }
            e += T.weight[j] * s;
        }
    }
    const double ball = spec.dim == 1 ? 2.0 * radius : M_PI * radius * radius;
    return std::sqrt(std::max(0.0, e / ball));
}

} // namespace

double tent_energy(const ExtensionField& E, const Tent& tent) {
    if (!(tent.radius > 0.0 && tent.radius <= E.grid().period / 4.0))
        throw std::invalid_argument("tent_energy: radius must be in (0, L/4]");
    const TentTables T = tent_tables(E);
    return tent_energy_tab(E.grid(), T, tent.center, tent.radius);
}

double carleson_sup(const ExtensionField& E) {
    const GridSpec& spec = E.grid();
    const int N = spec.points;
    const TentTables T = tent_tables(E);
    int lg = 0;
    while ((1 << lg) < N) ++lg;
    double best = 0.0;
    for (int j = 2; j <= lg - 2; ++j) {
        const int rpts = N >> j;
        const double radius = rpts * spec.spacing();
        const int stride = std::max(1, rpts / 4);
        std::vector<std::size_t> centers;
        if (spec.dim == 1) {
            for (int c = 0; c < N; c += stride) centers.push_back((std::size_t)c);
        } else {
            for (int c1 = 0; c1 < N; c1 += stride)
                for (int c2 = 0; c2 < N; c2 += stride) centers.push_back((std::size_t)c1 * N + c2);
        }
        best = std::max(best, par::max(centers.size(), [&](std::size_t i) {
                            return tent_energy_tab(spec, T, centers[i], radius);
                        }));
    }
    return best;
}

double trace_sobolev_functional(const ExtensionField& E, double nu, double p, DerivSelector sel) {
    const double s = E.order();
    switch (sel) {
        case DerivSelector::GradX:
            if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("trace_sobolev_functional: GradX needs nu in (0,1)");
            break;
        case DerivSelector::GradXGrad:
            if (!(nu > 0.0 && nu < 2.0))
                throw std::invalid_argument("trace_sobolev_functional: GradXGrad needs nu in (0,2)");
            break;
        case DerivSelector::Dt:
            if (!(nu > 0.0 && nu < 1.0 && nu < s))
                throw std::invalid_argument("trace_sobolev_functional: Dt needs nu in (0,1), nu < s");
            break;
    }
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("trace_sobolev_functional: p must be in (1,inf)");
    const GridSpec& spec = E.grid();
    const TGrid& tg = E.tgrid();
    const double power = sel == DerivSelector::GradXGrad ? 2.0 : 1.0;
    const double e = (power - 1.0 / p - nu) * p;

    std::vector<double> lev((std::size_t)tg.levels());
    for (int j = 0; j < tg.levels(); ++j) {
        const GridFunction dsq = deriv_sq(E, sel, j);
        const double I = spec.cell_volume() *
                         par::sum(dsq.size(), [&](std::size_t i) { return std::pow(dsq[i], 0.5 * p); });
        lev[(std::size_t)j] = std::pow(tg.t[(std::size_t)j], e) * I;
    }
    // Same trapezoid + left-tail treatment as bulk_integral, on scalars.
    double total = par::pairwise_sum(std::size_t{0}, lev.size(),
                                     [&](std::size_t j) { return tg.w[j] * lev[j]; });
    if (lev[0] > 0.0 && lev[1] > 0.0) {
        const double beta = std::log(lev[1] / lev[0]) / std::log(tg.t[1] / tg.t[0]);
        if (beta > -0.9 && beta < 8.0) total += lev[0] * tg.t[0] / (beta + 1.0);
    }
    return std::pow(total, 1.0 / p);
}

double holder_trace_functional(const ExtensionField& E, double nu) {
    if (!(nu > 0.0 && nu < E.order()))
        throw std::invalid_argument("holder_trace_functional: nu must be in (0,s)");
    const TGrid& tg = E.tgrid();
    double best = 0.0;
    for (int j = 0; j < tg.levels(); ++j)
        best = std::max(best, std::pow(tg.t[(std::size_t)j], 1.0 - nu) * max_abs(E.dt(j)));
    return best;
}

// ---------------------------------------------------------------------------

NormSpec NormSpec::lp(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: Lp needs p in [1,inf]");
    return {Kind::Lp, p, p, 0.0};
}
NormSpec NormSpec::lorentz(double p, double q) {
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("NormSpec: Lorentz needs p in (1,inf)");
    if (!(q >= 1.0)) throw std::invalid_argument("NormSpec: Lorentz needs q in [1,inf]");
    return {Kind::Lorentz, p, q, 0.0};
}
NormSpec NormSpec::bmo() { return {Kind::BMO, 0.0, 0.0, 0.0}; }
NormSpec NormSpec::holder(double nu) {
    if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("NormSpec: Holder needs nu in (0,1]");
    return {Kind::Holder, 0.0, 0.0, nu};
}
NormSpec NormSpec::gagliardo(double nu, double p) {
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("NormSpec: Gagliardo needs nu in (0,1)");
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("NormSpec: Gagliardo needs finite p >= 1");
    return {Kind::Gagliardo, p, p, nu};
}
NormSpec NormSpec::spectral_sobolev(double nu, double p) {
    if (!(nu > 0.0 && nu <= 2.0)) throw std::invalid_argument("NormSpec: SpectralSobolev needs nu in (0,2]");
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: SpectralSobolev needs p in [1,inf]");
    return {Kind::SpectralSobolev, p, p, nu};
}

double NormSpec::evaluate(const GridFunction& f) const {
    switch (kind) {
        case Kind::Lp: return lp_norm(f, p);
        case Kind::Lorentz: return lorentz_norm(f, p, q);
        case Kind::BMO: return bmo_seminorm(f);
        case Kind::Holder: return holder_seminorm(f, nu);
        case Kind::Gagliardo: return gagliardo_seminorm(f, nu, p);
        case Kind::SpectralSobolev: return lp_norm(frac_laplacian(f, nu), p);
    }
    return 0.0;
}

std::string NormSpec::name() const {
    switch (kind) {
        case Kind::Lp: return "Lp";
        case Kind::Lorentz: return "Lorentz";
        case Kind::BMO: return "BMO";
        case Kind::Holder: return "Holder";
        case Kind::Gagliardo: return "Gagliardo";
        case Kind::SpectralSobolev: return "SpectralSobolev";
    }
    return "?";
}

NormReport make_norm_report(const NormSpec& spec, const GridFunction& f) {
    NormReport r;
    r.spec = spec;
    r.value = spec.evaluate(f);
    r.metadata = "n=" + std::to_string(f.spec().dim) + " N=" + std::to_string(f.spec().points) +
                 " L=" + std::to_string(f.spec().period) +
                 (spec.kind == NormSpec::Kind::BMO ? " family=dyadic+thirds radii<=L/4" : "");
    if (!(r.value >= 0.0) || !std::isfinite(r.value)) throw std::runtime_error("NormReport: non-finite value");
    return r;
}

} // namespace hx
