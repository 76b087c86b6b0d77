#ifndef HX_COMMUTATORS_HPP
#define HX_COMMUTATORS_HPP

#include "hx/extension.hpp"
#include "hx/grid.hpp"
#include "hx/operators.hpp"

namespace hx {

/// h^2 sum phi * (d1u1 d2u2 - d2u1 d1u2), dealiased products (n = 2).
double jacobian_pairing(const GridFunction& phi, const GridFunction& u1, const GridFunction& u2);

/// Half-space determinant integral matching jacobian_pairing: columns
/// (grad Phi, grad U1, grad U2) in coordinate order (x1, x2, t); the frozen
/// orientation sign makes it equal to the boundary pairing (s = 1, zero-mean
/// boundary data for U^i).
BulkIntegral stokes_jacobian_bulk(const ExtensionField& Phi, const ExtensionField& U1, const ExtensionField& U2);

/// int (d1 f g1 + d2 f g2) phi with g = (d2 h, -d1 h); identical to
/// jacobian_pairing(phi, f, h) by construction (n = 2).
double div_curl_pairing(const GridFunction& phi, const GridFunction& f, const GridFunction& h);

/// [R_i, phi](g) = R_i(phi g) - phi R_i(g), dealiased products.
GridFunction crw_commutator(int axis, const GridFunction& phi, const GridFunction& g);

/// [I_sigma, phi](f) = I_sigma(phi f) - phi I_sigma(f); both Riesz potentials
/// kill the mean (projection convention), which changes the operator on
/// non-zero-mean inputs.
GridFunction chanillo_commutator(double sigma, const GridFunction& phi, const GridFunction& f);

/// [(-Lap)^{s/2}, g](f), s in (0,1].
GridFunction cmcim_commutator(double s, const GridFunction& g, const GridFunction& f);

/// Leibniz defect H_s(f,g) = (-Lap)^{s/2}(fg) - (-Lap)^{s/2}f g - f (-Lap)^{s/2}g,
/// s in (0,2]. Under the +|xi|^s symbol, H_2(f,g) = -2 grad f . grad g.
GridFunction leibniz_defect(double s, const GridFunction& f, const GridFunction& g);

/// int H_s(a,b) (-Lap)^{s/2} phi, s in (0,1].
double dalio_pairing(double s, const GridFunction& a, const GridFunction& b, const GridFunction& phi);

/// n=1 double commutators with [f,H](w) = f Hw - H(f w), zero-mean f, g:
///   minus: [f,H]((-Lap)^{1/2} g) - [g,H]((-Lap)^{1/2} f)
///   plus:  H( [f,H]((-Lap)^{1/2} g) + [g,H]((-Lap)^{1/2} f) )
GridFunction double_commutator_minus(const GridFunction& f, const GridFunction& g);
GridFunction double_commutator_plus(const GridFunction& f, const GridFunction& g);

/// Max relative L2 residual, across levels, of the extension/Riesz interplay
/// rules: dt(R~_i F) + dx_i F for every axis, plus (n=1) H~(dt F) + dx F and
/// dt F - H~(dx F). Exact per mode for the e^{-t|xi|} profile on the
/// Nyquist-free subspace; requires s = 1.
double extension_riesz_rules_check(const GridFunction& f);
double extension_riesz_rules_check(const GridFunction& f, const TGrid& tg);

} // namespace hx

#endif
