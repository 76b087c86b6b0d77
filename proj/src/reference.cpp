#include "hx/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace hx::ref {

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * (double)(k * j % n) / (double)n;
            s += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = s;
    }
    return out;
}

double gagliardo_seminorm(const GridFunction& f, double nu, double p) {
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    const double h = spec.spacing();
    double total = 0.0;
    if (spec.dim == 1) {
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y) {
                if (x == y) continue;
                const int d = std::abs(x - y);
                const double dist = h * std::min(d, N - d);
                total += std::pow(std::fabs(f[(std::size_t)x] - f[(std::size_t)y]), p) /
                         std::pow(dist, 1.0 + nu * p);
            }
        return std::pow(h * h * total, 1.0 / p);
    }
    for (int x1 = 0; x1 < N; ++x1)
        for (int x2 = 0; x2 < N; ++x2)
            for (int y1 = 0; y1 < N; ++y1)
                for (int y2 = 0; y2 < N; ++y2) {
                    if (x1 == y1 && x2 == y2) continue;
                    const int d1 = std::abs(x1 - y1), d2 = std::abs(x2 - y2);
                    const double dx = h * std::min(d1, N - d1), dy = h * std::min(d2, N - d2);
                    total += std::pow(std::fabs(f[(std::size_t)x1 * N + x2] - f[(std::size_t)y1 * N + y2]), p) /
                             std::pow(dx * dx + dy * dy, 0.5 * (2.0 + nu * p));
                }
    return std::pow(h * h * h * h * total, 1.0 / p);
}

double holder_seminorm(const GridFunction& f, double nu) {
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    const double h = spec.spacing();
    const double cap = spec.period / 4.0;
    double best = 0.0;
    if (spec.dim == 1) {
        for (int x = 0; x < N; ++x)
            for (int y = x + 1; y < N; ++y) {
                const int d = std::min(y - x, N - (y - x));
                const double dist = h * d;
                if (dist > cap + 1e-12) continue;
                best = std::max(best, std::fabs(f[(std::size_t)x] - f[(std::size_t)y]) / std::pow(dist, nu));
            }
        return best;
    }
    const std::size_t NN = (std::size_t)N * N;
    for (std::size_t x = 0; x < NN; ++x)
        for (std::size_t y = x + 1; y < NN; ++y) {
            const int x1 = (int)(x / (std::size_t)N), x2 = (int)(x % (std::size_t)N);
            const int y1 = (int)(y / (std::size_t)N), y2 = (int)(y % (std::size_t)N);
            const int d1 = std::abs(x1 - y1), d2 = std::abs(x2 - y2);
            const double dx = h * std::min(d1, N - d1), dy = h * std::min(d2, N - d2);
            const double dist = std::sqrt(dx * dx + dy * dy);
            if (dist > cap + 1e-12) continue;
            best = std::max(best, std::fabs(f[x] - f[y]) / std::pow(dist, nu));
        }
    return best;
}

namespace {

double osc_1d(const GridFunction& f, int start, int m) {
    const int N = f.spec().points;
    double sum = 0.0;
    for (int d = 0; d < m; ++d) sum += f[(std::size_t)((start + d) % N)];
    const double mu = sum / m;
    double osc = 0.0;
    for (int d = 0; d < m; ++d) osc += std::fabs(f[(std::size_t)((start + d) % N)] - mu);
    return osc / m;
}

} // namespace

double bmo_seminorm(const GridFunction& f) {
    const int N = f.spec().points;
    int lg = 0;
    while ((1 << lg) < N) ++lg;
    double best = 0.0;
    for (int j = 1; j <= lg - 2; ++j) {
        const int m = N >> j;
        std::vector<int> starts;
        for (int dlt : {0, m / 3, 2 * m / 3})
            for (int q0 = 0; q0 * m < N; ++q0) starts.push_back((q0 * m + dlt) % N);
        if (f.spec().dim == 1) {
            for (int s0 : starts) best = std::max(best, osc_1d(f, s0, m));
        } else {
            for (int s1 : starts)
                for (int s2 : starts) {
                    double sum = 0.0;
                    for (int d1 = 0; d1 < m; ++d1)
                        for (int d2 = 0; d2 < m; ++d2)
                            sum += f[(std::size_t)((s1 + d1) % N) * N + (std::size_t)((s2 + d2) % N)];
                    const double mu = sum / ((double)m * m);
                    double osc = 0.0;
                    for (int d1 = 0; d1 < m; ++d1)
                        for (int d2 = 0; d2 < m; ++d2)
                            osc += std::fabs(f[(std::size_t)((s1 + d1) % N) * N + (std::size_t)((s2 + d2) % N)] - mu);
                    best = std::max(best, osc / ((double)m * m));
                }
        }
    }
    return best;
}

double bmo_exhaustive_1d(const GridFunction& f) {
    if (f.spec().dim != 1) throw std::invalid_argument("bmo_exhaustive_1d: n = 1 only");
    const int N = f.spec().points;
    double best = 0.0;
    for (int m = 2; m <= N / 2; ++m)
        for (int s0 = 0; s0 < N; ++s0) best = std::max(best, osc_1d(f, s0, m));
    return best;
}

GridFunction maximal_function(const GridFunction& f) {
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    const int R = N / 4;
    GridFunction out = GridFunction::zeros(spec);
    if (spec.dim == 1) {
        for (int i = 0; i < N; ++i) {
            double best = 0.0;
            for (int r = 0; r <= R; ++r) {
                double s = 0.0;
                for (int d = -r; d <= r; ++d) s += std::fabs(f[(std::size_t)(((i + d) % N + N) % N)]);
                best = std::max(best, s / (2 * r + 1));
            }
            out[(std::size_t)i] = best;
        }
        return out;
    }
    for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2) {
            double best = 0.0;
            for (int r = 0; r <= R; ++r) {
                double s = 0.0;
                int c = 0;
                for (int d1 = -r; d1 <= r; ++d1)
                    for (int d2 = -r; d2 <= r; ++d2) {
                        if (d1 * d1 + d2 * d2 > r * r) continue;
                        s += std::fabs(f[(std::size_t)(((i1 + d1) % N + N) % N) * N +
                                         (std::size_t)(((i2 + d2) % N + N) % N)]);
                        ++c;
                    }
                best = std::max(best, s / c);
            }
            out[(std::size_t)i1 * N + i2] = best;
        }
    return out;
}

GridFunction square_function(const ExtensionField& E, DerivSelector sel, double nu) {
    const GridSpec& spec = E.grid();
    const TGrid& tg = E.tgrid();
    const double h = spec.spacing();
    const double n = (double)spec.dim;
    const double power = sel == DerivSelector::GradXGrad ? 3.0 : 1.0;
    const int N = spec.points;

    std::vector<double> acc(spec.size(), 0.0);
    for (int j = 0; j < tg.levels(); ++j) {
        const double t = tg.t[(std::size_t)j];
        if (t > spec.period / 4.0) break;
        GridFunction dsq = GridFunction::zeros(spec);
        auto add_sq = [&](const GridFunction& g) {
            for (std::size_t i = 0; i < dsq.size(); ++i) dsq[i] += g[i] * g[i];
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
        const double wt = std::pow(t, power - 2.0 * nu - n) * tg.w[(std::size_t)j] * spec.cell_volume();
        for (std::size_t i = 0; i < acc.size(); ++i) {
            double s = 0.0;
            if (spec.dim == 1) {
                for (int d = -N / 2; d <= N / 2; ++d) {
                    if (std::abs(d) * h >= t) continue;
                    s += dsq[(std::size_t)((((int)i + d) % N + N) % N)];
                }
            } else {
                const int i1 = (int)(i / (std::size_t)N), i2 = (int)(i % (std::size_t)N);
                const int rad = (int)(t / h) + 1;
                for (int d1 = -rad; d1 <= rad; ++d1)
                    for (int d2 = -rad; d2 <= rad; ++d2) {
                        if (h * std::sqrt((double)d1 * d1 + (double)d2 * d2) >= t) continue;
                        s += dsq[(std::size_t)(((i1 + d1) % N + N) % N) * N + (std::size_t)(((i2 + d2) % N + N) % N)];
                    }
            }
            acc[i] += wt * s;
        }
    }
    GridFunction out = GridFunction::zeros(spec);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(std::max(0.0, acc[i]));
    return out;
}

GridFunction dealiased_product(const GridFunction& f, const GridFunction& g) {
    return pointwise_product(f, g); // valid oracle only for alias-free bands
}

} // namespace hx::ref
