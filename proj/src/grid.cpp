#include "hx/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "hx/fft.hpp"
#include "hx/parallel.hpp"

namespace hx {

static bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

GridSpec::GridSpec(int n, int N, double L) : dim(n), points(N), period(L) {
    if (n != 1 && n != 2) throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
    if (!is_pow2(N) || N < 8) throw std::invalid_argument("GridSpec: N must be a power of two, N >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("GridSpec: period must be positive");
}

std::size_t GridSpec::size() const {
    return dim == 1 ? (std::size_t)points : (std::size_t)points * (std::size_t)points;
}

double GridSpec::cell_volume() const {
    const double h = spacing();
    return dim == 1 ? h : h * h;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values) : spec_(spec), v_(std::move(values)) {
    if (v_.size() != spec_.size()) throw std::invalid_argument("GridFunction: size mismatch");
    for (double x : v_)
        if (!std::isfinite(x)) throw std::invalid_argument("GridFunction: non-finite value");
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
    return GridFunction(spec, std::vector<double>(spec.size(), 0.0));
}

GridFunction GridFunction::sample(const GridSpec& spec, const std::function<double(const std::array<double, 2>&)>& g) {
    std::vector<double> v(spec.size());
    const double h = spec.spacing();
    if (spec.dim == 1) {
        for (int i = 0; i < spec.points; ++i) v[(std::size_t)i] = g({h * i, 0.0});
    } else {
        for (int i1 = 0; i1 < spec.points; ++i1)
            for (int i2 = 0; i2 < spec.points; ++i2)
                v[(std::size_t)i1 * spec.points + i2] = g({h * i1, h * i2});
    }
    return GridFunction(spec, std::move(v));
}

SpectralField::SpectralField(GridSpec spec, std::vector<std::complex<double>> coeffs)
    : spec_(spec), c_(std::move(coeffs)) {
    if (c_.size() != spec_.size()) throw std::invalid_argument("SpectralField: size mismatch");
}

// In-place n-dimensional transform of a full complex array.
static void transform_nd(const GridSpec& spec, std::complex<double>* c, bool inv) {
    const int N = spec.points;
    const Fft& plan = fft_plan((std::size_t)N);
    if (spec.dim == 1) {
        inv ? plan.inverse(c) : plan.forward(c);
        return;
    }
    // Rows (contiguous), then columns.
    par::for_each((std::size_t)N, [&](std::size_t r) {
        inv ? plan.inverse(c + r * (std::size_t)N) : plan.forward(c + r * (std::size_t)N);
    });
    par::for_each((std::size_t)N, [&](std::size_t col) {
        std::vector<std::complex<double>> tmp((std::size_t)N);
        for (int r = 0; r < N; ++r) tmp[(std::size_t)r] = c[(std::size_t)r * N + col];
        inv ? plan.inverse(tmp.data()) : plan.forward(tmp.data());
        for (int r = 0; r < N; ++r) c[(std::size_t)r * N + col] = tmp[(std::size_t)r];
    });
}

SpectralField forward_transform(const GridFunction& f) {
    std::vector<std::complex<double>> c(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) c[i] = f[i];
    transform_nd(f.spec(), c.data(), false);
    // Enforce exact conjugate symmetry (real input): pairs are averaged, so
    // multiplier outputs stay real up to plain roundoff even when symbols
    // amplify the spectral noise floor.
    const int N = f.spec().points;
    auto pair_up = [&](std::size_t a, std::size_t b) {
        if (a == b) {
            c[a] = {c[a].real(), 0.0};
        } else if (a < b) {
            const std::complex<double> avg = 0.5 * (c[a] + std::conj(c[b]));
            c[a] = avg;
            c[b] = std::conj(avg);
        }
    };
    if (f.spec().dim == 1) {
        for (int i = 0; i < N; ++i) pair_up((std::size_t)i, (std::size_t)((N - i) % N));
    } else {
        for (int i1 = 0; i1 < N; ++i1)
            for (int i2 = 0; i2 < N; ++i2)
                pair_up((std::size_t)i1 * N + i2, (std::size_t)((N - i1) % N) * N + (std::size_t)((N - i2) % N));
    }
    return SpectralField(f.spec(), std::move(c));
}

GridFunction inverse_transform(const SpectralField& cf, double ref_l2) {
    std::vector<std::complex<double>> c = cf.coeffs();
    transform_nd(cf.spec(), c.data(), true);
    const double scale = 1.0 / (double)cf.spec().size();
    std::vector<double> v(c.size());
    double n2 = 0.0, imag2 = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        v[i] = c[i].real() * scale;
        n2 += std::norm(c[i]) * scale * scale;
        imag2 += c[i].imag() * c[i].imag() * scale * scale;
    }
    // n2 and imag2 are plain sums of squared sample values; scale the
    // reference the same way (ref_l2 is a typical value magnitude).
    const double ref2 = std::max(n2, ref_l2 * ref_l2 * (double)cf.spec().size());
    if (imag2 > 1e-24 * ref2 && imag2 > 1e-280)
        throw std::runtime_error("inverse_transform: imaginary residue above 1e-12 of the L2 norm");
    return GridFunction(cf.spec(), std::move(v));
}

SpectralField apply_multiplier(const SpectralField& cf, const Multiplier& m) {
    const GridSpec& spec = cf.spec();
    std::vector<std::complex<double>> c(cf.size());
    const int N = spec.points;
    bool bad = false;
    par::for_each(cf.size(), [&](std::size_t i) {
        std::array<double, 2> xi{0.0, 0.0};
        bool zero;
        if (spec.dim == 1) {
            const int k = spec.wavenumber((int)i);
            xi[0] = spec.freq(k);
            zero = (k == 0);
        } else {
            const int k1 = spec.wavenumber((int)(i / (std::size_t)N));
            const int k2 = spec.wavenumber((int)(i % (std::size_t)N));
            xi[0] = spec.freq(k1);
            xi[1] = spec.freq(k2);
            zero = (k1 == 0 && k2 == 0);
        }
        const std::complex<double> factor = zero ? m.at_zero : m.symbol(xi);
        if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) bad = true;
        c[i] = cf[i] * factor;
    });
    if (bad) throw std::runtime_error("apply_multiplier: symbol produced NaN/Inf on the lattice");
    return SpectralField(spec, std::move(c));
}

GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m) {
    return inverse_transform(apply_multiplier(forward_transform(f), m));
}

// Map a signed wavenumber to its storage index on an M-point axis.
static inline std::size_t slot(int k, int M) { return (std::size_t)(k >= 0 ? k : k + M); }

GridFunction dealiased_product(const GridFunction& f, const GridFunction& g) {
    if (f.spec() != g.spec()) throw std::invalid_argument("dealiased_product: grid spec mismatch");
    const GridSpec& spec = f.spec();
    const int N = spec.points;
    const int M = 2 * N;
    const GridSpec big(spec.dim, M, spec.period);

    SpectralField cf = forward_transform(f);
    SpectralField cg = forward_transform(g);

    // Pad scale (M/N)^n keeps the interpolant values unchanged on the fine grid.
    const double pad_scale = (double)big.size() / (double)spec.size();
    auto pad = [&](const SpectralField& c) {
        std::vector<std::complex<double>> out(big.size(), 0.0);
        if (spec.dim == 1) {
            for (int i = 0; i < N; ++i) out[slot(spec.wavenumber(i), M)] = pad_scale * c[(std::size_t)i];
        } else {
            for (int i1 = 0; i1 < N; ++i1)
                for (int i2 = 0; i2 < N; ++i2)
                    out[slot(spec.wavenumber(i1), M) * (std::size_t)M + slot(spec.wavenumber(i2), M)] =
                        pad_scale * c[(std::size_t)i1 * N + i2];
        }
        return SpectralField(big, std::move(out));
    };

    GridFunction fb = inverse_transform(pad(cf));
    GridFunction gb = inverse_transform(pad(cg));
    std::vector<double> prod(big.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fb[i] * gb[i];
    SpectralField cp = forward_transform(GridFunction(big, std::move(prod)));

    // Truncate to the N-lattice; fold +N/2 into the -N/2 slot per axis.
    const double scale = (double)spec.size() / (double)big.size();
    std::vector<std::complex<double>> out(spec.size(), 0.0);
    auto fetch = [&](int k1, int k2) -> std::complex<double> {
        if (spec.dim == 1) return cp[slot(k1, M)];
        return cp[slot(k1, M) * (std::size_t)M + slot(k2, M)];
    };
    if (spec.dim == 1) {
        for (int i = 0; i < N; ++i) {
            const int k = spec.wavenumber(i);
            std::complex<double> v = fetch(k, 0);
            if (k == -N / 2) v += fetch(N / 2, 0);
            out[(std::size_t)i] = v * scale;
        }
    } else {
        for (int i1 = 0; i1 < N; ++i1) {
            for (int i2 = 0; i2 < N; ++i2) {
                const int k1 = spec.wavenumber(i1);
                const int k2 = spec.wavenumber(i2);
                std::complex<double> v = fetch(k1, k2);
                if (k1 == -N / 2) v += fetch(N / 2, k2);
                if (k2 == -N / 2) v += fetch(k1, N / 2);
                if (k1 == -N / 2 && k2 == -N / 2) v += fetch(N / 2, N / 2);
                out[(std::size_t)i1 * N + i2] = v * scale;
            }
        }
    }
    return inverse_transform(SpectralField(spec, std::move(out)));
}

GridFunction differentiate(const GridFunction& f, int axis) {
    const GridSpec& spec = f.spec();
    if (axis < 0 || axis >= spec.dim) throw std::invalid_argument("differentiate: axis out of range");
    SpectralField c = forward_transform(f);
    const int N = spec.points;
    par::for_each(c.size(), [&](std::size_t i) {
        int k;
        if (spec.dim == 1)
            k = spec.wavenumber((int)i);
        else
            k = axis == 0 ? spec.wavenumber((int)(i / (std::size_t)N)) : spec.wavenumber((int)(i % (std::size_t)N));
        if (k == -N / 2) {
            c[i] = 0.0; // Nyquist line dropped to keep the derivative real
        } else {
            c[i] *= std::complex<double>(0.0, spec.freq(k));
        }
    });
    return inverse_transform(c);
}

std::vector<GridFunction> gradient(const GridFunction& f) {
    std::vector<GridFunction> g;
    for (int a = 0; a < f.spec().dim; ++a) g.push_back(differentiate(f, a));
    return g;
}

double mean(const GridFunction& f) {
    return par::sum(f.size(), [&](std::size_t i) { return f[i]; }) / (double)f.size();
}

double integral(const GridFunction& f) {
    return f.spec().cell_volume() * par::sum(f.size(), [&](std::size_t i) { return f[i]; });
}

double inner(const GridFunction& f, const GridFunction& g) {
    if (f.spec() != g.spec()) throw std::invalid_argument("inner: grid spec mismatch");
    return f.spec().cell_volume() * par::sum(f.size(), [&](std::size_t i) { return f[i] * g[i]; });
}

double l2_norm(const GridFunction& f) {
    return std::sqrt(f.spec().cell_volume() * par::sum(f.size(), [&](std::size_t i) { return f[i] * f[i]; }));
}

double max_abs(const GridFunction& f) {
    return par::max(f.size(), [&](std::size_t i) { return std::fabs(f[i]); });
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    if (a.spec() != b.spec()) throw std::invalid_argument("GridFunction +: spec mismatch");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return GridFunction(a.spec(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    if (a.spec() != b.spec()) throw std::invalid_argument("GridFunction -: spec mismatch");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return GridFunction(a.spec(), std::move(v));
}

GridFunction operator*(double a, const GridFunction& f) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * f[i];
    return GridFunction(f.spec(), std::move(v));
}

GridFunction pointwise_product(const GridFunction& f, const GridFunction& g) {
    if (f.spec() != g.spec()) throw std::invalid_argument("pointwise_product: spec mismatch");
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] * g[i];
    return GridFunction(f.spec(), std::move(v));
}

GridFunction subtract_mean(const GridFunction& f) {
    const double m = mean(f);
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i] - m;
    return GridFunction(f.spec(), std::move(v));
}

} // namespace hx
