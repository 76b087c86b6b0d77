#ifndef HX_REFERENCE_HPP
#define HX_REFERENCE_HPP

#include <complex>
#include <vector>

#include "hx/extension.hpp"
#include "hx/grid.hpp"
#include "hx/norms.hpp"

// Plain serial implementations kept for testing and benchmarking the OpenMP
// kernels. Same semantics, no blocking, no pragmas; values agree with the
// parallel kernels to floating-point reassociation (sup-type kernels exactly).
namespace hx::ref {

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in);

double gagliardo_seminorm(const GridFunction& f, double nu, double p);
double holder_seminorm(const GridFunction& f, double nu);
double bmo_seminorm(const GridFunction& f);
/// Exhaustive sup over ALL grid-aligned intervals of length <= N/2 (n=1):
/// the brute-force oracle the dyadic family is checked against.
double bmo_exhaustive_1d(const GridFunction& f);
GridFunction maximal_function(const GridFunction& f);
GridFunction square_function(const ExtensionField& E, DerivSelector sel, double nu);
GridFunction dealiased_product(const GridFunction& f, const GridFunction& g);

} // namespace hx::ref

#endif
