#ifndef HX_HARNESS_HPP
#define HX_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hx/grid.hpp"

namespace hx {

enum class GenKind { Trig, Bump, ModulatedBump };

/// One suite run configuration; JSON-serializable (see io.hpp). Zeroed
/// numeric fields mean "per-suite default".
struct TrialConfig {
    std::string suite;
    int dim = 1;
    int grid = 0;                 // N; 0 = suite default
    double period = 2.0 * M_PI;   // L
    int levels = 96;              // TGrid M
    double tmin = 0.0;            // 0 = L/(2N)
    double tmax = 0.0;            // 0 = decay-based default
    double s = 0.0;               // 0 = suite default
    double nu = 0.0;
    double sigma = 0.0;
    double inner = 0.0;           // leibniz:inter split exponent t
    std::vector<double> pvec;     // exponent tuples as the suite needs
    std::vector<double> qvec;
    std::vector<double> svec;
    int trials = 0;               // 0 = default (100 for n=1, 20 for n=2)
    std::uint64_t seed = 1;
    GenKind kind = GenKind::Trig;
    int band = 0;                 // populated modes have |k|_inf < band; 0 = N/4
    bool zero_mean = true;
    bool refine_check = true;     // also run at 2N and report the max-ratio shift

    GridSpec grid_spec() const;
    int effective_trials() const { return trials > 0 ? trials : (dim == 1 ? 100 : 20); }
    int effective_band(int N) const { return band > 0 ? band : N / 4; }
};

/// Deterministic from (seed, suite, role, trial) and independent of N:
/// coefficients are drawn per mode index, so refining the grid reproduces the
/// same continuum function. Output is O(1)-normalized (max |f| = 1).
GridFunction generate_test_function(const TrialConfig& cfg, int role, int trial);
/// Same function sampled on an overridden grid (used for N -> 2N refinement).
GridFunction generate_test_function(const TrialConfig& cfg, int role, int trial, const GridSpec& spec);

std::uint64_t trial_seed(const TrialConfig& cfg, int trial);

// ---------------------------------------------------------------------------

struct IdentityResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Every exact-identity check of the operator/extension/commutator modules at
/// the configured size; residuals and documented tolerances per identity.
std::vector<IdentityResult> run_identity_suite(const TrialConfig& cfg);

// ---------------------------------------------------------------------------

struct EstimateTrial {
    std::uint64_t seed = 0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct EstimateAggregate {
    double max = 0.0;
    double median = 0.0;
    double stability = 0.0; // |max(2N) - max(N)| / max(N); NaN if not computed
};

struct EstimateReport {
    std::string suite;
    TrialConfig config;
    std::vector<EstimateTrial> trials;
    int degenerate = 0; // excluded trials (RHS below 1e-12 * scale)
    EstimateAggregate aggregate;
};

struct EstimateForm {
    std::string name;
    std::string group;
    int dim = 1;
    int default_grid = 1024;
    int lhs_degree = 0; // joint homogeneity degree in all roles
    int rhs_degree = 0;
    int roles = 2;
    std::function<void(TrialConfig&)> defaults;  // fill suite-default exponents
    std::function<void(const TrialConfig&)> validate; // throws on bad tuples
    std::function<std::pair<double, double>(const TrialConfig&, const std::vector<GridFunction>&)> eval;
};

const std::vector<EstimateForm>& estimate_registry();
const EstimateForm& estimate_form(const std::string& name);
std::vector<std::string> estimate_group_forms(const std::string& group);

EstimateReport run_estimate(const TrialConfig& cfg);
/// Ratio of one trial with all inputs scaled by lambda, divided by the
/// unscaled ratio (equals 1 when the declared homogeneity degrees match).
double homogeneity_probe(const TrialConfig& cfg, int trial, double lambda);

// ---------------------------------------------------------------------------

struct TraceResult {
    std::string name;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    double ratio_max_refined = 0.0;
    int excluded = 0;
    double spread() const { return ratio_min > 0.0 ? ratio_max / ratio_min : INFINITY; }
    double stability() const {
        return ratio_max > 0.0 ? std::fabs(ratio_max_refined - ratio_max) / ratio_max : INFINITY;
    }
    bool pass = false;
};

/// Prop 10.x trace characterizations: ratio interval over the trial family,
/// bounded spread (default ceiling 50) and N -> 2N max-ratio shift < 30%.
std::vector<TraceResult> run_trace_equivalence(const TrialConfig& cfg, double spread_ceiling = 50.0,
                                               double stability_ceiling = 0.30);

} // namespace hx

#endif
