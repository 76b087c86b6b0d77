#include <cmath>
#include <stdexcept>

#include "hx/commutators.hpp"
#include "hx/harness.hpp"
#include "hx/norms.hpp"
#include "hx/operators.hpp"

namespace hx {

namespace {

GridFunction magnitude(const std::vector<GridFunction>& comps) {
    GridFunction out = GridFunction::zeros(comps[0].spec());
    for (const auto& g : comps)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i] * g[i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(out[i]);
    return out;
}

GridFunction grad_magnitude(const GridFunction& f) { return magnitude(gradient(f)); }

// I_sigma with the sigma = 0 limit read as the identity.
GridFunction riesz_potential_or_id(const GridFunction& f, double sigma) {
    return sigma == 0.0 ? f : riesz_potential(f, sigma);
}

void need(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(std::string("config validation: ") + msg);
}

double dual(double p) { return p / (p - 1.0); }

std::vector<EstimateForm> build_registry() {
    std::vector<EstimateForm> reg;

    // --- Jacobian (n = 2) ---------------------------------------------------
    {
        EstimateForm f;
        f.name = "jacobian:bmo";
        f.group = "jacobian";
        f.dim = 2;
        f.default_grid = 128;
        f.roles = 3; // phi, u1, u2
        f.lhs_degree = f.rhs_degree = 3;
        f.defaults = [](TrialConfig&) {};
        f.validate = [](const TrialConfig& c) { need(c.dim == 2, "jacobian needs n = 2"); };
        f.eval = [](const TrialConfig&, const std::vector<GridFunction>& in) {
            const double lhs = std::fabs(jacobian_pairing(in[0], in[1], in[2]));
            const GridFunction gm = magnitude({differentiate(in[1], 0), differentiate(in[1], 1),
                                               differentiate(in[2], 0), differentiate(in[2], 1)});
            const double gn = lp_norm(gm, 2.0);
            return std::make_pair(lhs, bmo_seminorm(in[0]) * gn * gn);
        };
        reg.push_back(f);
    }
    {
        EstimateForm f;
        f.name = "jacobian:inter";
        f.group = "jacobian";
        f.dim = 2;
        f.default_grid = 32; // Gagliardo guard allows the 2N refinement at 64
        f.roles = 3;
        f.lhs_degree = f.rhs_degree = 3;
        f.defaults = [](TrialConfig& c) {
            if (c.svec.empty()) c.svec = {2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
            if (c.pvec.empty()) c.pvec = {3.0, 3.0, 3.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.dim == 2, "jacobian needs n = 2");
            need(c.svec.size() == 3 && c.pvec.size() == 3, "need 3 exponent pairs (s_i, p_i)");
            double ssum = 0.0, psum = 0.0;
            for (double si : c.svec) {
                need(si > 0.0 && si < 1.0, "s_i must be in (0,1)");
                ssum += si;
            }
            for (double pi : c.pvec) {
                need(pi > 1.0 && std::isfinite(pi), "p_i must be in (1,inf)");
                psum += 1.0 / pi;
            }
            need(std::fabs(ssum - 2.0) < 1e-12, "sum s_i must equal n = 2");
            need(std::fabs(psum - 1.0) < 1e-12, "sum 1/p_i must equal 1");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = std::fabs(jacobian_pairing(in[0], in[1], in[2]));
            double rhs = 1.0;
            for (int i = 0; i < 3; ++i)
                rhs *= gagliardo_seminorm(in[(std::size_t)i], c.svec[(std::size_t)i], c.pvec[(std::size_t)i]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }

    // --- div-curl (n = 2) ---------------------------------------------------
    {
        EstimateForm f;
        f.name = "divcurl:bmo";
        f.group = "divcurl";
        f.dim = 2;
        f.default_grid = 128;
        f.roles = 3; // phi, f, h
        f.lhs_degree = f.rhs_degree = 3;
        f.defaults = [](TrialConfig& c) {
            if (c.pvec.empty()) c.pvec = {2.0, 2.0};
            if (c.qvec.empty()) c.qvec = {2.0, 2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.dim == 2, "divcurl needs n = 2");
            need(c.pvec.size() == 2 && c.qvec.size() == 2, "need (p1,p2) and (q1,q2)");
            need(c.pvec[0] > 1.0 && c.pvec[1] > 1.0, "p_i in (1,inf)");
            need(std::fabs(1.0 / c.pvec[0] + 1.0 / c.pvec[1] - 1.0) < 1e-12, "1/p1 + 1/p2 = 1");
            need(c.qvec[0] >= 1.0 && c.qvec[1] >= 1.0, "q_i in [1,inf]");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = std::fabs(div_curl_pairing(in[0], in[1], in[2]));
            const GridFunction g = magnitude({differentiate(in[2], 1), differentiate(in[2], 0)});
            const double rhs = bmo_seminorm(in[0]) * lorentz_norm(grad_magnitude(in[1]), c.pvec[0], c.qvec[0]) *
                               lorentz_norm(g, c.pvec[1], c.qvec[1]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }

    // --- Coifman-Rochberg-Weiss ----------------------------------------------
    {
        EstimateForm f;
        f.name = "crw";
        f.group = "crw";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2; // phi, g
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.pvec.empty()) c.pvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0 && std::isfinite(c.pvec[0]), "p in (1,inf)");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(crw_commutator(0, in[0], in[1]), c.pvec[0]);
            return std::make_pair(lhs, bmo_seminorm(in[0]) * lp_norm(in[1], c.pvec[0]));
        };
        reg.push_back(f);
    }

    // --- Chanillo ------------------------------------------------------------
    {
        EstimateForm f;
        f.name = "chanillo";
        f.group = "chanillo";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2; // phi, f
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.sigma == 0.0) c.sigma = 0.4;
            if (c.pvec.empty()) c.pvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            const double n = (double)c.dim;
            need(c.sigma > 0.0 && c.sigma < n, "sigma in (0,n)");
            need(c.pvec.size() == 1, "need p");
            const double p = c.pvec[0];
            need(p > 1.0 && p < n / c.sigma, "need 1 < p < n/sigma");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double p = c.pvec[0];
            const double q = 1.0 / (1.0 / p - c.sigma / (double)c.dim);
            const double lhs = lp_norm(chanillo_commutator(c.sigma, in[0], in[1]), q);
            return std::make_pair(lhs, bmo_seminorm(in[0]) * lp_norm(in[1], p));
        };
        reg.push_back(f);
    }

    // --- Coifman-McIntosh-Meyer family ----------------------------------------
    {
        EstimateForm f;
        f.name = "cmcim:lip";
        f.group = "cmcim";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2; // g, f
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.s == 0.0) c.s = 0.5;
            if (c.pvec.empty()) c.pvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.s > 0.0 && c.s <= 1.0, "s in (0,1]");
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0, "p in (1,inf)");
            need(c.s < 1.0 || c.dim >= 1, "s = 1 uses the identity in place of I_0");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(cmcim_commutator(c.s, in[0], in[1]), c.pvec[0]);
            const double rhs = holder_seminorm(in[0], 1.0) *
                               lp_norm(riesz_potential_or_id(in[1], 1.0 - c.s), c.pvec[0]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }
    {
        EstimateForm f;
        f.name = "cmcim:hoelder";
        f.group = "cmcim";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2;
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.s == 0.0) c.s = 0.5;
            if (c.sigma == 0.0) c.sigma = 0.75;
            if (c.pvec.empty()) c.pvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.s > 0.0 && c.s <= 1.0, "s in (0,1]");
            need(c.sigma >= c.s && c.sigma <= 1.0, "sigma in [s,1]");
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0, "p in (1,inf)");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(cmcim_commutator(c.s, in[0], in[1]), c.pvec[0]);
            const double rhs = (bmo_seminorm(frac_laplacian(in[0], c.sigma)) + holder_seminorm(in[0], c.sigma)) *
                               lp_norm(riesz_potential_or_id(in[1], c.sigma - c.s), c.pvec[0]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }
    {
        EstimateForm f;
        f.name = "cmcim:inter";
        f.group = "cmcim";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2;
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.s == 0.0) c.s = 0.5;
            if (c.sigma == 0.0) c.sigma = 0.75;
            if (c.pvec.empty()) c.pvec = {2.0};
            if (c.qvec.empty()) c.qvec = {4.0, 4.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.s > 0.0 && c.s <= 1.0, "s in (0,1]");
            need(c.sigma >= c.s && c.sigma < 1.0, "sigma in [s,1)");
            need(c.pvec.size() == 1 && c.qvec.size() == 2, "need p and (q1,q2)");
            need(std::fabs(1.0 / c.qvec[0] + 1.0 / c.qvec[1] - 1.0 / c.pvec[0]) < 1e-12, "1/q1 + 1/q2 = 1/p");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(cmcim_commutator(c.s, in[0], in[1]), c.pvec[0]);
            const double rhs = lp_norm(frac_laplacian(in[0], c.sigma), c.qvec[0]) *
                               lp_norm(riesz_potential_or_id(in[1], c.sigma - c.s), c.qvec[1]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }
    {
        EstimateForm f;
        f.name = "cmcim:riesz";
        f.group = "cmcim";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2;
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.sigma == 0.0) c.sigma = 0.4;
            if (c.pvec.empty()) c.pvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.sigma > 0.0 && c.sigma < 1.0, "sigma in (0,1)");
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0, "p in (1,inf)");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(crw_commutator(0, in[0], in[1]), c.pvec[0]);
            const double rhs = bmo_seminorm(frac_laplacian(in[0], c.sigma)) *
                               lp_norm(riesz_potential(in[1], c.sigma), c.pvec[0]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }
    {
        EstimateForm f;
        f.name = "cmcim:riesz-inter";
        f.group = "cmcim";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2;
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.sigma == 0.0) c.sigma = 0.4;
            if (c.pvec.empty()) c.pvec = {2.0};
            if (c.qvec.empty()) c.qvec = {4.0, 4.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.sigma >= 0.0 && c.sigma < 1.0, "sigma in [0,1)");
            need(c.pvec.size() == 1 && c.qvec.size() == 2, "need p and (q1,q2)");
            need(std::fabs(1.0 / c.qvec[0] + 1.0 / c.qvec[1] - 1.0 / c.pvec[0]) < 1e-12, "1/q1 + 1/q2 = 1/p");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(crw_commutator(0, in[0], in[1]), c.pvec[0]);
            const double rhs = lp_norm(frac_laplacian(in[0], c.sigma), c.qvec[0]) *
                               lp_norm(riesz_potential_or_id(in[1], c.sigma), c.qvec[1]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }

    // --- fractional Leibniz ----------------------------------------------------
    {
        EstimateForm f;
        f.name = "leibniz:bmo";
        f.group = "leibniz";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2; // f, phi
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.s == 0.0) c.s = 0.5;
            if (c.pvec.empty()) c.pvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.s > 0.0 && c.s <= 1.0, "s in (0,1]");
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0, "p in (1,inf)");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lp_norm(leibniz_defect(c.s, in[0], in[1]), c.pvec[0]);
            return std::make_pair(lhs, lp_norm(frac_laplacian(in[0], c.s), c.pvec[0]) * bmo_seminorm(in[1]));
        };
        reg.push_back(f);
    }
    {
        EstimateForm f;
        f.name = "leibniz:inter";
        f.group = "leibniz";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2;
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.s == 0.0) c.s = 0.5;
            if (c.inner == 0.0) c.inner = 0.5 * c.s;
            if (c.pvec.empty()) c.pvec = {2.0, 4.0, 4.0};
            if (c.qvec.empty()) c.qvec = {2.0, 4.0, 4.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.s > 0.0 && c.s <= 2.0, "s in (0,2]");
            need(c.inner > 0.0 && c.inner < c.s, "inner exponent t in (0,s)");
            need(c.pvec.size() == 3 && c.qvec.size() == 3, "need (p,p1,p2) and (q,q1,q2)");
            need(std::fabs(1.0 / c.pvec[1] + 1.0 / c.pvec[2] - 1.0 / c.pvec[0]) < 1e-12, "1/p = 1/p1 + 1/p2");
            need(std::fabs(1.0 / c.qvec[1] + 1.0 / c.qvec[2] - 1.0 / c.qvec[0]) < 1e-12, "1/q = 1/q1 + 1/q2");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = lorentz_norm(leibniz_defect(c.s, in[0], in[1]), c.pvec[0], c.qvec[0]);
            const double rhs = lorentz_norm(frac_laplacian(in[0], c.s - c.inner), c.pvec[1], c.qvec[1]) *
                               lorentz_norm(frac_laplacian(in[1], c.inner), c.pvec[2], c.qvec[2]);
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }

    // --- Da Lio-Riviere three-term pairing ---------------------------------------
    {
        EstimateForm f;
        f.name = "dalio";
        f.group = "dalio";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 3; // a, b, phi
        f.lhs_degree = f.rhs_degree = 3;
        f.defaults = [](TrialConfig& c) {
            if (c.s == 0.0) c.s = 0.5;
            if (c.pvec.empty()) c.pvec = {2.0};
            if (c.qvec.empty()) c.qvec = {2.0};
        };
        f.validate = [](const TrialConfig& c) {
            need(c.s > 0.0 && c.s <= 1.0, "s in (0,1]");
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0, "p in (1,inf)");
            need(c.qvec.size() == 1 && c.qvec[0] >= 1.0, "q in [1,inf]");
        };
        f.eval = [](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const double lhs = std::fabs(dalio_pairing(c.s, in[0], in[1], in[2]));
            const double p = c.pvec[0], q = c.qvec[0];
            const double rhs = bmo_seminorm(in[2]) * lorentz_norm(frac_laplacian(in[0], c.s), p, q) *
                               lorentz_norm(frac_laplacian(in[1], c.s), dual(p), std::isinf(q) ? 1.0 : dual(q));
            return std::make_pair(lhs, rhs);
        };
        reg.push_back(f);
    }

    // --- double commutator (n = 1) ------------------------------------------------
    for (const bool plus : {false, true}) {
        EstimateForm f;
        f.name = plus ? "double:plus" : "double:minus";
        f.group = "double";
        f.dim = 1;
        f.default_grid = 1024;
        f.roles = 2; // f, g (zero-mean)
        f.lhs_degree = f.rhs_degree = 2;
        f.defaults = [](TrialConfig& c) {
            if (c.svec.empty()) c.svec = {0.5, 0.5};
            if (c.pvec.empty()) c.pvec = {2.0};
            if (c.qvec.empty()) c.qvec = {2.0};
            c.zero_mean = true;
        };
        f.validate = [](const TrialConfig& c) {
            need(c.svec.size() == 2, "need (s1,s2)");
            need(c.svec[0] > 0.0 && c.svec[0] < 1.0 && c.svec[1] > 0.0 && c.svec[1] < 1.0, "s_i in (0,1)");
            need(std::fabs(c.svec[0] + c.svec[1] - 1.0) < 1e-12, "s1 + s2 = 1");
            need(c.pvec.size() == 1 && c.pvec[0] > 1.0, "p in (1,inf)");
            need(c.zero_mean, "double commutator requires zero-mean inputs");
        };
        f.eval = [plus](const TrialConfig& c, const std::vector<GridFunction>& in) {
            const GridFunction w =
                plus ? double_commutator_plus(in[0], in[1]) : double_commutator_minus(in[0], in[1]);
            const double p = c.pvec[0], q = c.qvec[0];
            const double rhs = lorentz_norm(frac_laplacian(in[0], c.svec[0]), p, q) *
                               lorentz_norm(frac_laplacian(in[1], c.svec[1]), dual(p), std::isinf(q) ? 1.0 : dual(q));
            return std::make_pair(lp_norm(w, 1.0), rhs);
        };
        reg.push_back(f);
    }

    return reg;
}

} // namespace

const std::vector<EstimateForm>& estimate_registry() {
    static const std::vector<EstimateForm> reg = build_registry();
    return reg;
}

const EstimateForm& estimate_form(const std::string& name) {
    for (const auto& f : estimate_registry())
        if (f.name == name) return f;
    throw std::invalid_argument("unknown estimate suite: " + name);
}

std::vector<std::string> estimate_group_forms(const std::string& group) {
    std::vector<std::string> out;
    for (const auto& f : estimate_registry())
        if (f.group == group || f.name == group) out.push_back(f.name);
    if (out.empty()) throw std::invalid_argument("unknown estimate group: " + group);
    return out;
}

} // namespace hx
