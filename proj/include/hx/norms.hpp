#ifndef HX_NORMS_HPP
#define HX_NORMS_HPP

#include <string>
#include <vector>

#include "hx/extension.hpp"
#include "hx/grid.hpp"

namespace hx {

double lp_norm(const GridFunction& f, double p); // p in [1, inf], inf = max

/// |samples| sorted descending; each step carries measure h^n.
struct Rearrangement {
    std::vector<double> values;
    double cell = 0.0;
};
Rearrangement decreasing_rearrangement(const GridFunction& f);

/// Lorentz norm evaluated exactly on the rearrangement step function;
/// q = inf uses sup over steps of t^{1/p} f*(t) (right endpoints).
double lorentz_norm(const GridFunction& f, double p, double q);

/// Sup of mean oscillation over the dyadic cube family (sides L/2^j,
/// j = 1..log2(N)-2) plus the one-third-trick shifted copies per level.
double bmo_seminorm(const GridFunction& f);
/// Same over (n+1)-dimensional blocks (reflected extensions); cubes pair an
/// x-cube of side l with a t-interval of length l, cells weighted by the
/// block's t-measures.
double bmo_seminorm(const SampleBlock& b);

/// sup |f(x)-f(y)| / d(x,y)^nu over pairs with torus distance <= L/4.
double holder_seminorm(const GridFunction& f, double nu);

/// Gagliardo double sum over all pairs (torus metric, diagonal excluded).
/// Guarded: n=1 needs N <= 4096, n=2 needs N <= 64.
double gagliardo_seminorm(const GridFunction& f, double nu, double p);

/// Hardy-Littlewood maximal function over discrete balls of radius <= L/4
/// (radius 0 included, so Mf >= |f| pointwise).
GridFunction maximal_function(const GridFunction& f);

enum class DerivSelector { Dt, GradX, GradXGrad };

/// Nontangential square function over the cone {(y,t_j): |y-x| < t_j},
/// truncated at t = L/4. Admissible nu: Dt in [0,s), GradX in [0,1),
/// GradXGrad in (0,1+s); the t-power is 1 for first derivatives, 3 for
/// GradXGrad.
GridFunction square_function(const ExtensionField& E, DerivSelector sel, double nu);

struct Tent {
    std::size_t center; // flat grid index
    double radius;      // <= L/4
};

/// sup over tents of (|B|^{-1} sum_{T(B)} t |grad_{x,t} F|^2 cellvol)^{1/2};
/// tent centers on a coarsened lattice, dyadic radii.
double carleson_sup(const ExtensionField& E);
double tent_energy(const ExtensionField& E, const Tent& tent);

/// (int int |t^{power-1/p-nu} D F|^p dt dx)^{1/p} with power 1 for GradX/Dt
/// and 2 for the second x-derivative selector; includes the same power-law
/// left-tail correction as bulk_integral. Admissible nu: GradX (0,1),
/// GradXGrad here means the full second x-derivative with nu in (0,2),
/// Dt (0,1) with nu < s.
double trace_sobolev_functional(const ExtensionField& E, double nu, double p, DerivSelector sel);

/// sup over levels of t^{1-nu} ||dF/dt||_inf (Hoelder-scale companion).
double holder_trace_functional(const ExtensionField& E, double nu);

struct NormSpec {
    enum class Kind { Lp, Lorentz, BMO, Holder, Gagliardo, SpectralSobolev } kind;
    double p = 2.0;
    double q = 2.0;
    double nu = 0.5;

    static NormSpec lp(double p);
    static NormSpec lorentz(double p, double q);
    static NormSpec bmo();
    static NormSpec holder(double nu);
    static NormSpec gagliardo(double nu, double p);
    static NormSpec spectral_sobolev(double nu, double p); // ||(-Lap)^{nu/2} f||_p

    double evaluate(const GridFunction& f) const;
    std::string name() const;
};

struct NormReport {
    NormSpec spec;
    double value = 0.0;
    std::string metadata; // discretization notes (grid, family, policy)
};
NormReport make_norm_report(const NormSpec& spec, const GridFunction& f);

} // namespace hx

#endif
