#ifndef HX_EXTENSION_HPP
#define HX_EXTENSION_HPP

#include <functional>
#include <memory>
#include <vector>

#include "hx/grid.hpp"
#include "hx/operators.hpp"

namespace hx {

/// Geometric t-levels for the truncated half-space, with trapezoid weights
/// for int_{t_1}^{t_M} dt (the weights reproduce the length exactly) and a
/// power-law left-tail correction handled by bulk_integral.
struct TGrid {
    std::vector<double> t;
    std::vector<double> w;

    static TGrid geometric(double tmin, double tmax, int levels);
    /// Ledger defaults: t_min = L/(2N) (half a grid cell), t_max chosen so the
    /// slowest nonzero mode decays below 1e-8, M = 96 levels.
    static TGrid standard(const GridSpec& spec, int levels = 96);

    int levels() const { return (int)t.size(); }
    bool operator==(const TGrid& o) const { return t == o.t && w == o.w; }
};

class ExtensionField;

/// Precomputes per-level profile tables phi_s(t_j |xi|), phi_s'(t_j |xi|) for
/// one (grid, s, tgrid) triple so extending many sources is cheap. Immutable
/// and shareable after construction; hold it in a shared_ptr when extending
/// many sources so the tables are not copied per field.
class ExtensionOperator : public std::enable_shared_from_this<ExtensionOperator> {
public:
    ExtensionOperator(const GridSpec& spec, double s, TGrid tg);

    const GridSpec& grid() const { return spec_; }
    double order() const { return s_; }
    const TGrid& tgrid() const { return tg_; }
    const PoissonProfile& profile() const { return prof_; }

    ExtensionField extend(const GridFunction& f) const;

    // Per-coefficient tables, indexed [level][coefficient].
    const std::vector<double>& value_table(int level) const { return val_[level]; }
    const std::vector<double>& deriv_table(int level) const { return der_[level]; }

private:
    friend class ExtensionField;
    GridSpec spec_;
    double s_;
    TGrid tg_;
    PoissonProfile prof_;
    std::vector<std::vector<double>> val_, der_;
    std::vector<double> xi_abs_; // |xi| per coefficient
};

/// F^s(x,t) = P_t^s f(x) on the t-levels, with lazily cached derivative
/// slices. All t-derivatives come from the analytic profile derivative
/// (never finite differences); x-derivatives are spectral.
class ExtensionField {
public:
    const GridFunction& source() const;
    double order() const;
    const TGrid& tgrid() const;
    const GridSpec& grid() const;
    int levels() const;

    const GridFunction& slice(int j) const;
    const GridFunction& dt(int j) const;
    const GridFunction& dx(int j, int axis) const;
    const GridFunction& dxx(int j, int a, int b) const;
    const GridFunction& dxt(int j, int axis) const;

    std::shared_ptr<const ExtensionOperator> op() const;

private:
    friend class ExtensionOperator;
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Convenience one-shot constructor (builds a throwaway operator).
ExtensionField extend(const GridFunction& f, double s, const TGrid& tg);

/// Max over modes/levels of the t^{1-s}-weighted per-mode PDE residual,
/// weighted by the source spectrum |f^(xi)|/max|f^|; bounds the residual of
/// div(t^{1-s} grad F) = 0. Zero for s = 1 by the exact exponential profile.
double pde_residual(const ExtensionField& E);

/// (-t^{1-s} dF/dt)/d_s at the smallest level; approaches
/// frac_laplacian(f, s) at rate O(t_1^{min(2-s,1)}). Requires s in (0,1].
GridFunction neumann_trace(const ExtensionField& E);

struct BulkIntegral {
    double interior = 0.0;  // trapezoid over [t_1, t_M]
    double left = 0.0;      // power-law fit over [0, t_1]
    double tail_estimate = 0.0; // |I(t_M)| * t_M
    double value() const { return interior + left; }
};

/// Composes the h^n-weighted x-sum of integrand(level) with the TGrid
/// t-quadrature. Throws if the integrand at t_M is above tail_tol relative to
/// the accumulated integral scale.
BulkIntegral bulk_integral(const TGrid& tg, const std::function<GridFunction(int)>& integrand,
                           double tail_tol = 1e-8);

/// Evenly reflected extension samples (s = 1): slices at +-t_j with the
/// per-level quadrature weights, for BMO evaluation over R^{n+1}.
struct SampleBlock {
    GridSpec spec;
    std::vector<double> t;  // ascending, mirrored
    std::vector<double> tw; // per-level t-measure
    std::vector<GridFunction> slices;
};
SampleBlock reflected_extension(const GridFunction& f, const TGrid& tg);

/// sup_x |P_t f(x) - mean of f over the radius-t ball at x| (s = 1, c = 1
/// since P_t 1 = 1 under phi(0) = 1). Requires t <= L/4.
double poisson_vs_ball_mean(const GridFunction& f, double t);

} // namespace hx

#endif
