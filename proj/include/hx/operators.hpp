#ifndef HX_OPERATORS_HPP
#define HX_OPERATORS_HPP

#include <vector>

#include "hx/grid.hpp"

namespace hx {

// Sign conventions, fixed once for the whole project:
//  - fractional Laplacian: symbol +|xi|^s (normalization constant c = 1), so
//    it is the positive operator with frac_laplacian(cos(kx), s) = k^s cos(kx);
//  - Riesz transform R_i: symbol i*xi_i/|xi|, so the exact factorization
//    d/dx_i = R_i o frac_laplacian(. , 1) holds on the lattice. Consequently
//    the n=1 Hilbert transform satisfies H cos(kx) = -sin(kx) for k > 0
//    (opposite to the classical p.v.-kernel convention).
// Singular symbols declare the value 0 at xi = 0; odd symbols drop the axis
// Nyquist line to preserve conjugate symmetry of real inputs.

/// (-Laplace)^{s/2}, s in (0,2]; annihilates constants.
GridFunction frac_laplacian(const GridFunction& f, double s);

/// Riesz potential (-Laplace)^{-sigma/2}, sigma in (0,n); kills the mean
/// (the xi = 0 value of |xi|^{-sigma} is declared 0).
GridFunction riesz_potential(const GridFunction& f, double sigma);

GridFunction riesz_transform(const GridFunction& f, int axis);
GridFunction hilbert_transform(const GridFunction& f); // n=1 Riesz transform

/// Fractional gradient: component i is R_i((-Laplace)^{s/2} f).
std::vector<GridFunction> fractional_gradient(const GridFunction& f, double s);

/// Radial Fourier profile phi_s of the generalized Poisson operator: the
/// extension of f has per-mode coefficients phi_s(t|xi|) f^(xi). phi_s solves
///     phi'' + ((1-s)/r) phi' = phi,  phi(0) = 1,  phi decreasing to 0,
/// and the Neumann constant is d_s = lim_{r->0} -r^{1-s} phi'(r).
/// For s = 1 the profile is exactly e^{-r}. For s != 1 it is evaluated by
/// trapezoidal quadrature (in log lambda) of the Bessel-type representation
///     B(a, r) = int_0^inf lambda^a e^{-lambda - r^2/(4 lambda)} dlambda/lambda,
/// with phi = B(s/2, r)/B(s/2, 0); the derivative and second derivative reuse
/// the same node sweep with shifted exponents.
class PoissonProfile {
public:
    double order() const { return s_; }
    double neumann_constant() const { return d_; }

    double value(double r) const;
    double deriv(double r) const;
    double second_deriv(double r) const;
    /// phi''(r) + ((1-s)/r) phi'(r) - phi(r); zero for the exact profile.
    double ode_residual(double r) const;

private:
    friend PoissonProfile build_poisson_profile(double s);
    double s_ = 1.0;
    double d_ = 1.0;
    double log_norm_ = 0.0; // log B(s/2, 0)
    bool exact_exp_ = true; // s == 1 branch
};

/// Throws on s outside (0,2) or quadrature non-convergence.
PoissonProfile build_poisson_profile(double s);

} // namespace hx

#endif
