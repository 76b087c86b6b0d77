#include <cmath>
#include <deque>
#include <memory>

#include "hx/harness.hpp"
#include "hx/norms.hpp"
#include "hx/operators.hpp"
#include "hx/parallel.hpp"

namespace hx {

namespace {

// Sliding-window maximum on a circular array, window |d| <= rad.
std::vector<double> circular_window_max(const std::vector<double>& v, int rad) {
    const int N = (int)v.size();
    std::vector<double> out((std::size_t)N);
    if (2 * rad + 1 >= N) {
        double m = v[0];
        for (double x : v) m = std::max(m, x);
        for (auto& o : out) o = m;
        return out;
    }
    std::deque<int> dq;
    // process indices -rad .. N-1+rad on the unrolled circle
    auto val = [&](int i) { return v[(std::size_t)((i % N + N) % N)]; };
    for (int i = -rad; i < N + rad; ++i) {
        while (!dq.empty() && val(dq.back()) <= val(i)) dq.pop_back();
        dq.push_back(i);
        const int center = i - rad;
        if (center >= -rad && !dq.empty()) {
            while (dq.front() < i - 2 * rad) dq.pop_front();
            if (center >= 0 && center < N) out[(std::size_t)center] = val(dq.front());
        }
    }
    return out;
}

// sup over the truncated cone {(y,t_j): |y-x| < t_j, t_j <= L/4} of the
// per-level field values produced by `level_field`.
GridFunction cone_sup(const ExtensionField& E, const std::function<GridFunction(int)>& level_field) {
    const GridSpec& spec = E.grid();
    const TGrid& tg = E.tgrid();
    const double h = spec.spacing();
    const int N = spec.points;
    std::vector<double> best(spec.size(), -INFINITY);
    for (int j = 0; j < tg.levels(); ++j) {
        const double t = tg.t[(std::size_t)j];
        if (t > spec.period / 4.0) break;
        int rad = (int)std::floor(t / h);
        if ((double)rad * h >= t) --rad;
        if (rad < 0) continue;
        const GridFunction g = level_field(j);
        if (spec.dim == 1) {
            std::vector<double> vals(g.values());
            const std::vector<double> wmax = circular_window_max(vals, rad);
            for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], wmax[i]);
        } else {
            // rows: sliding max along x2 with dy-dependent width, then max over dy.
            std::vector<int> widths((std::size_t)rad + 1);
            for (int dy = 0; dy <= rad; ++dy)
                widths[(std::size_t)dy] =
                    (int)std::floor(std::sqrt(std::max(0.0, (double)rad * rad - (double)dy * dy)) + 1e-9);
            // horizontal max per row per distinct width
            std::vector<int> uniq = widths;
            std::sort(uniq.begin(), uniq.end());
            uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
            // hmax[w][row][col]
            std::vector<std::vector<std::vector<double>>> hmax(uniq.size());
            for (std::size_t u = 0; u < uniq.size(); ++u) {
                hmax[u].resize((std::size_t)N);
                par::for_each((std::size_t)N, [&](std::size_t r) {
                    std::vector<double> row((std::size_t)N);
                    for (int i2 = 0; i2 < N; ++i2) row[(std::size_t)i2] = g[r * (std::size_t)N + (std::size_t)i2];
                    hmax[u][r] = circular_window_max(row, uniq[u]);
                });
            }
            auto widx = [&](int w) {
                return (std::size_t)(std::lower_bound(uniq.begin(), uniq.end(), w) - uniq.begin());
            };
            par::for_each((std::size_t)N, [&](std::size_t r) {
                for (int i2 = 0; i2 < N; ++i2) {
                    double m = -INFINITY;
                    for (int dy = -rad; dy <= rad; ++dy) {
                        const std::size_t rr = (std::size_t)(((int)r + dy) % N + N) % (std::size_t)N;
                        m = std::max(m, hmax[widx(widths[(std::size_t)std::abs(dy)])][rr][(std::size_t)i2]);
                    }
                    best[r * (std::size_t)N + (std::size_t)i2] = std::max(best[r * (std::size_t)N + (std::size_t)i2], m);
                }
            });
        }
    }
    GridFunction out = GridFunction::zeros(spec);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = best[i] == -INFINITY ? 0.0 : best[i];
    return out;
}

GridFunction abs_field(const GridFunction& g) {
    GridFunction out = g;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::fabs(out[i]);
    return out;
}

GridFunction magnitude_of(const std::vector<GridFunction>& comps) {
    GridFunction out = GridFunction::zeros(comps[0].spec());
    for (const auto& g : comps)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i] * g[i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(out[i]);
    return out;
}

struct Characterization {
    std::string name;
    double s = 1.0;
    // lhs/rhs per trial at one resolution; op is the shared extension operator.
    std::function<double(const ExtensionField&)> lhs;
    std::function<double(const GridFunction&)> rhs;
    bool needs_gagliardo = false;
};

std::vector<Characterization> characterization_list(const TrialConfig& cfg) {
    std::vector<Characterization> cs;
    const bool n1 = cfg.dim == 1;

    // Prop 10.2: t-weighted Lp trace functionals vs the Gagliardo seminorm.
    {
        Characterization c;
        c.name = "sobolev:gradx";
        c.s = 0.7;
        c.needs_gagliardo = true;
        c.lhs = [](const ExtensionField& E) { return trace_sobolev_functional(E, 0.4, 2.0, DerivSelector::GradX); };
        c.rhs = [](const GridFunction& f) { return gagliardo_seminorm(f, 0.4, 2.0); };
        cs.push_back(c);
    }
    if (n1) {
        Characterization c;
        c.name = "sobolev:gradx:p3";
        c.s = 1.0;
        c.needs_gagliardo = true;
        c.lhs = [](const ExtensionField& E) { return trace_sobolev_functional(E, 0.4, 3.0, DerivSelector::GradX); };
        c.rhs = [](const GridFunction& f) { return gagliardo_seminorm(f, 0.4, 3.0); };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "sobolev:gradxx";
        c.s = 1.0;
        c.needs_gagliardo = true;
        c.lhs = [](const ExtensionField& E) { return trace_sobolev_functional(E, 0.6, 2.0, DerivSelector::GradXGrad); };
        c.rhs = [](const GridFunction& f) { return gagliardo_seminorm(f, 0.6, 2.0); };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "sobolev:dt";
        c.s = 0.7;
        c.needs_gagliardo = true;
        c.lhs = [](const ExtensionField& E) { return trace_sobolev_functional(E, 0.4, 2.0, DerivSelector::Dt); };
        c.rhs = [](const GridFunction& f) { return gagliardo_seminorm(f, 0.4, 2.0); };
        cs.push_back(c);
    }

    // Prop 10.3: nontangential square functions vs ||L^{nu} f||_2.
    {
        Characterization c;
        c.name = "square:dt:nu0";
        c.s = 1.0;
        c.lhs = [](const ExtensionField& E) { return lp_norm(square_function(E, DerivSelector::Dt, 0.0), 2.0); };
        c.rhs = [](const GridFunction& f) { return lp_norm(f, 2.0); };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "square:dt";
        c.s = 0.7;
        c.lhs = [](const ExtensionField& E) { return lp_norm(square_function(E, DerivSelector::Dt, 0.35), 2.0); };
        c.rhs = [](const GridFunction& f) { return lp_norm(frac_laplacian(f, 0.35), 2.0); };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "square:gradx";
        c.s = 1.0;
        c.lhs = [](const ExtensionField& E) { return lp_norm(square_function(E, DerivSelector::GradX, 0.5), 2.0); };
        c.rhs = [](const GridFunction& f) { return lp_norm(frac_laplacian(f, 0.5), 2.0); };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "square:gradxgrad";
        c.s = 0.7;
        c.lhs = [](const ExtensionField& E) { return lp_norm(square_function(E, DerivSelector::GradXGrad, 0.9), 2.0); };
        c.rhs = [](const GridFunction& f) { return lp_norm(frac_laplacian(f, 0.9), 2.0); };
        cs.push_back(c);
    }

    // Prop 10.4: Carleson tent energies vs BMO.
    for (double s : {1.0, 0.5}) {
        Characterization c;
        c.name = s == 1.0 ? "carleson:bmo" : "carleson:bmo:s05";
        c.s = s;
        c.lhs = [](const ExtensionField& E) { return carleson_sup(E); };
        c.rhs = [](const GridFunction& f) { return bmo_seminorm(f); };
        cs.push_back(c);
    }

    // Prop 10.5: evenly reflected extension, BMO to BMO.
    {
        Characterization c;
        c.name = "reflected:bmo";
        c.s = 1.0;
        c.lhs = [](const ExtensionField& E) {
            return bmo_seminorm(reflected_extension(E.source(), E.tgrid()));
        };
        c.rhs = [](const GridFunction& f) { return bmo_seminorm(f); };
        cs.push_back(c);
    }

    // Prop 10.6: Hoelder scale.
    {
        Characterization c;
        c.name = "hoelder:dt";
        c.s = 1.0;
        c.lhs = [](const ExtensionField& E) { return holder_trace_functional(E, 0.5); };
        c.rhs = [](const GridFunction& f) { return holder_seminorm(f, 0.5); };
        cs.push_back(c);
    }

    // Prop 10.1: cone sups vs maximal functions (pointwise; ratio = max_x).
    {
        Characterization c;
        c.name = "maximal:value";
        c.s = 0.7;
        c.lhs = [](const ExtensionField& E) {
            const GridFunction cs_ = cone_sup(E, [&](int j) { return abs_field(E.slice(j)); });
            const GridFunction M = maximal_function(E.source());
            double worst = 0.0;
            for (std::size_t i = 0; i < cs_.size(); ++i)
                if (M[i] > 1e-12) worst = std::max(worst, cs_[i] / M[i]);
            return worst;
        };
        c.rhs = [](const GridFunction&) { return 1.0; };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "maximal:dt";
        c.s = 0.7;
        c.lhs = [](const ExtensionField& E) {
            const double s = E.order();
            const GridFunction cs_ = cone_sup(E, [&](int j) {
                GridFunction g = abs_field(E.dt(j));
                const double w = std::pow(E.tgrid().t[(std::size_t)j], 1.0 - s);
                for (std::size_t i = 0; i < g.size(); ++i) g[i] *= w;
                return g;
            });
            const GridFunction M = maximal_function(frac_laplacian(E.source(), s));
            double worst = 0.0;
            for (std::size_t i = 0; i < cs_.size(); ++i)
                if (M[i] > 1e-12) worst = std::max(worst, cs_[i] / M[i]);
            return worst;
        };
        c.rhs = [](const GridFunction&) { return 1.0; };
        cs.push_back(c);
    }
    {
        Characterization c;
        c.name = "maximal:gradx";
        c.s = 0.7;
        c.lhs = [](const ExtensionField& E) {
            const double s = E.order();
            const GridSpec& spec = E.grid();
            const GridFunction cs_ = cone_sup(E, [&](int j) {
                std::vector<GridFunction> comps;
                for (int a = 0; a < spec.dim; ++a) comps.push_back(E.dx(j, a));
                GridFunction g = magnitude_of(comps);
                const double w = std::pow(E.tgrid().t[(std::size_t)j], 1.0 - s);
                for (std::size_t i = 0; i < g.size(); ++i) g[i] *= w;
                return g;
            });
            const GridFunction M = maximal_function(magnitude_of(fractional_gradient(E.source(), s)));
            double worst = 0.0;
            for (std::size_t i = 0; i < cs_.size(); ++i)
                if (M[i] > 1e-12) worst = std::max(worst, cs_[i] / M[i]);
            return worst;
        };
        c.rhs = [](const GridFunction&) { return 1.0; };
        cs.push_back(c);
    }

    return cs;
}

} // namespace

std::vector<TraceResult> run_trace_equivalence(const TrialConfig& cfg0, double spread_ceiling,
                                               double stability_ceiling) {
    TrialConfig cfg = cfg0;
    cfg.suite = cfg.suite.empty() ? "trace" : cfg.suite;
    if (cfg.grid == 0) cfg.grid = cfg.dim == 1 ? 1024 : 32; // n = 2 capped by the Gagliardo guard at 2N
    cfg.zero_mean = true;

    const GridSpec coarse = cfg.grid_spec();
    const GridSpec fine(coarse.dim, 2 * coarse.points, coarse.period);
    // One TGrid for both resolutions so the N -> 2N shift measures x-resolution only.
    const TGrid tg = TGrid::standard(fine, cfg.levels);
    const int T = std::min(cfg.effective_trials(), 20);

    std::vector<TraceResult> out;
    for (const Characterization& c : characterization_list(cfg)) {
        auto op_c = std::make_shared<const ExtensionOperator>(coarse, c.s, tg);
        auto op_f = std::make_shared<const ExtensionOperator>(fine, c.s, tg);
        TraceResult r;
        r.name = c.name;
        r.ratio_min = INFINITY;
        TrialConfig gen = cfg;
        gen.suite = "trace:" + c.name;
        for (int trial = 0; trial < T; ++trial) {
            const GridFunction f = generate_test_function(gen, 0, trial, coarse);
            const double rhs = c.rhs(f);
            if (!(rhs > 1e-12)) {
                ++r.excluded;
                continue;
            }
            const double ratio = c.lhs(op_c->extend(f)) / rhs;
            r.ratio_min = std::min(r.ratio_min, ratio);
            r.ratio_max = std::max(r.ratio_max, ratio);

            const GridFunction ff = generate_test_function(gen, 0, trial, fine);
            const double rhs2 = c.rhs(ff);
            if (rhs2 > 1e-12)
                r.ratio_max_refined = std::max(r.ratio_max_refined, c.lhs(op_f->extend(ff)) / rhs2);
        }
        r.pass = std::isfinite(r.ratio_max) && r.ratio_min > 0.0 && r.spread() <= spread_ceiling &&
                 r.stability() <= stability_ceiling;
        out.push_back(r);
    }
    return out;
}

} // namespace hx
