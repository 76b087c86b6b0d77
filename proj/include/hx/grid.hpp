#ifndef HX_GRID_HPP
#define HX_GRID_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace hx {

/// Uniform periodic grid on [0,L)^n, n in {1,2}, N points per axis (power of
/// two, N >= 8). The frequency lattice is xi_k = 2*pi*k/L with
/// -N/2 <= k < N/2 per axis.
struct GridSpec {
    int dim = 1;
    int points = 1024;
    double period = 6.283185307179586476925286766559;

    GridSpec() = default;
    GridSpec(int n, int N, double L);

    double spacing() const { return period / points; }
    std::size_t size() const;
    double cell_volume() const;

    /// Signed lattice index of the coefficient at storage position i.
    int wavenumber(int i) const { return i < points / 2 ? i : i - points; }
    double freq(int k) const { return 2.0 * M_PI * (double)k / period; }

    bool operator==(const GridSpec& o) const {
        return dim == o.dim && points == o.points && period == o.period;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Real samples on a GridSpec, row-major (index = i1*N + i2 for n=2).
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(GridSpec spec, std::vector<double> values);
    static GridFunction zeros(const GridSpec& spec);
    /// Sample a callable at the grid nodes; g receives the coordinate vector.
    static GridFunction sample(const GridSpec& spec, const std::function<double(const std::array<double, 2>&)>& g);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double at(int i1, int i2 = 0) const { return v_[(std::size_t)i1 * (spec_.dim == 2 ? spec_.points : 1) + i2]; }

private:
    GridSpec spec_;
    std::vector<double> v_;
};

/// Complex Fourier coefficients of a real GridFunction, conjugate-symmetric,
/// stored full-size in the same row-major layout as the samples.
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(GridSpec spec, std::vector<std::complex<double>> coeffs);

    const GridSpec& spec() const { return spec_; }
    std::size_t size() const { return c_.size(); }
    const std::complex<double>& operator[](std::size_t i) const { return c_[i]; }
    std::complex<double>& operator[](std::size_t i) { return c_[i]; }
    const std::vector<std::complex<double>>& coeffs() const { return c_; }
    std::vector<std::complex<double>>& coeffs() { return c_; }

private:
    GridSpec spec_;
    std::vector<std::complex<double>> c_;
};

/// Frequency multiplier m(xi) with an explicitly declared value at xi = 0
/// (singular symbols must declare one; conventionally 0).
struct Multiplier {
    std::function<std::complex<double>(const std::array<double, 2>&)> symbol;
    std::complex<double> at_zero = 0.0;
};

// Transform normalization, documented once and used everywhere: forward is the
// plain sum c_k = sum_x f(x) e^{-i xi_k x} (unnormalized), the inverse carries
// 1/N^n. Hence mean(f) = c_0 / N^n and Plancherel reads
//   h^n sum |f|^2 = h^n/N^n sum |c|^2.
SpectralField forward_transform(const GridFunction& f);
/// ref_l2 (optional) is a reference function scale: the imaginary-residue
/// check passes when the residue is below 1e-12 of max(result L2, ref_l2),
/// so outputs that are numerically zero relative to their source don't trip it.
GridFunction inverse_transform(const SpectralField& c, double ref_l2 = 0.0);

/// Apply m in frequency space and return the real result. Throws if the
/// symbol produces NaN/Inf or if the inverse transform has an imaginary
/// residue above 1e-12 of the L2 norm (symbol incompatible with real input).
GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m);
SpectralField apply_multiplier(const SpectralField& c, const Multiplier& m);

/// Exact product of the two band-limited interpolants: zero-padded transform
/// (padded to 2N per axis), pointwise product, truncation back to the N-grid.
/// A product mode at +N/2 is folded into the grid's -N/2 slot, which matches
/// pointwise sampling whenever band(f) + band(g) <= N/2.
GridFunction dealiased_product(const GridFunction& f, const GridFunction& g);

/// Spectral derivative along an axis; the axis Nyquist line is zeroed to keep
/// the output real. Annihilates constants.
GridFunction differentiate(const GridFunction& f, int axis);
std::vector<GridFunction> gradient(const GridFunction& f);

double mean(const GridFunction& f);
/// h^n-weighted sum (the torus integral).
double integral(const GridFunction& f);
double inner(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
double max_abs(const GridFunction& f);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double a, const GridFunction& f);
/// Plain pointwise sample product (aliases; see dealiased_product).
GridFunction pointwise_product(const GridFunction& f, const GridFunction& g);
GridFunction subtract_mean(const GridFunction& f);

} // namespace hx

#endif
