#include "hx/commutators.hpp"

#include <cmath>
#include <stdexcept>

#include "hx/parallel.hpp"

namespace hx {

namespace {

void require_dim(const GridFunction& f, int dim, const char* who) {
    if (f.spec().dim != dim) throw std::invalid_argument(std::string(who) + ": wrong dimension");
}

void require_same(const GridFunction& a, const GridFunction& b, const char* who) {
    if (a.spec() != b.spec()) throw std::invalid_argument(std::string(who) + ": grid spec mismatch");
}

void require_zero_mean(const GridFunction& f, const char* who) {
    if (std::fabs(mean(f)) > 1e-10 * std::max(1.0, max_abs(f)))
        throw std::invalid_argument(std::string(who) + ": zero-mean input required");
}

} // namespace

double jacobian_pairing(const GridFunction& phi, const GridFunction& u1, const GridFunction& u2) {
    require_dim(phi, 2, "jacobian_pairing");
    require_same(phi, u1, "jacobian_pairing");
    require_same(phi, u2, "jacobian_pairing");
    GridFunction det = dealiased_product(differentiate(u1, 0), differentiate(u2, 1)) -
                       dealiased_product(differentiate(u1, 1), differentiate(u2, 0));
    return inner(phi, det);
}

BulkIntegral stokes_jacobian_bulk(const ExtensionField& Phi, const ExtensionField& U1, const ExtensionField& U2) {
    if (Phi.grid().dim != 2) throw std::invalid_argument("stokes_jacobian_bulk: n = 2 only");
    if (Phi.order() != 1.0 || U1.order() != 1.0 || U2.order() != 1.0)
        throw std::invalid_argument("stokes_jacobian_bulk: s = 1 extensions required");
    if (!(Phi.tgrid() == U1.tgrid()) || !(Phi.tgrid() == U2.tgrid()) || Phi.grid() != U1.grid() ||
        Phi.grid() != U2.grid())
        throw std::invalid_argument("stokes_jacobian_bulk: mismatched extensions");
    require_zero_mean(U1.source(), "stokes_jacobian_bulk");
    require_zero_mean(U2.source(), "stokes_jacobian_bulk");

    // Orientation: outward normal of {t=0} is -e_t, so the bulk determinant
    // with columns (grad Phi, grad U1, grad U2) equals MINUS the boundary
    // pairing; the sign is frozen here (calibrated against jacobian_pairing).
    auto integrand = [&](int j) {
        const GridFunction& p1 = Phi.dx(j, 0);
        const GridFunction& p2 = Phi.dx(j, 1);
        const GridFunction& pt = Phi.dt(j);
        const GridFunction& a1 = U1.dx(j, 0);
        const GridFunction& a2 = U1.dx(j, 1);
        const GridFunction& at = U1.dt(j);
        const GridFunction& b1 = U2.dx(j, 0);
        const GridFunction& b2 = U2.dx(j, 1);
        const GridFunction& bt = U2.dt(j);
        GridFunction out = GridFunction::zeros(Phi.grid());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double det = p1[i] * (a2[i] * bt[i] - at[i] * b2[i]) -
                               p2[i] * (a1[i] * bt[i] - at[i] * b1[i]) +
                               pt[i] * (a1[i] * b2[i] - a2[i] * b1[i]);
            out[i] = -det;
        }
        return out;
    };
    return bulk_integral(Phi.tgrid(), integrand);
}

double div_curl_pairing(const GridFunction& phi, const GridFunction& f, const GridFunction& h) {
    require_dim(phi, 2, "div_curl_pairing");
    require_same(phi, f, "div_curl_pairing");
    require_same(phi, h, "div_curl_pairing");
    const GridFunction g1 = differentiate(h, 1);
    const GridFunction g2 = -1.0 * differentiate(h, 0);
    GridFunction pairing = dealiased_product(differentiate(f, 0), g1) + dealiased_product(differentiate(f, 1), g2);
    return inner(phi, pairing);
}

GridFunction crw_commutator(int axis, const GridFunction& phi, const GridFunction& g) {
    require_same(phi, g, "crw_commutator");
    return riesz_transform(dealiased_product(phi, g), axis) - dealiased_product(phi, riesz_transform(g, axis));
}

GridFunction chanillo_commutator(double sigma, const GridFunction& phi, const GridFunction& f) {
    require_same(phi, f, "chanillo_commutator");
    return riesz_potential(dealiased_product(phi, f), sigma) - dealiased_product(phi, riesz_potential(f, sigma));
}

GridFunction cmcim_commutator(double s, const GridFunction& g, const GridFunction& f) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("cmcim_commutator: s must be in (0,1]");
    require_same(g, f, "cmcim_commutator");
    return frac_laplacian(dealiased_product(g, f), s) - dealiased_product(g, frac_laplacian(f, s));
}

GridFunction leibniz_defect(double s, const GridFunction& f, const GridFunction& g) {
    if (!(s > 0.0 && s <= 2.0)) throw std::invalid_argument("leibniz_defect: s must be in (0,2]");
    require_same(f, g, "leibniz_defect");
    return frac_laplacian(dealiased_product(f, g), s) - dealiased_product(frac_laplacian(f, s), g) -
           dealiased_product(f, frac_laplacian(g, s));
}

double dalio_pairing(double s, const GridFunction& a, const GridFunction& b, const GridFunction& phi) {
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("dalio_pairing: s must be in (0,1]");
    require_same(a, phi, "dalio_pairing");
    return inner(leibniz_defect(s, a, b), frac_laplacian(phi, s));
}

namespace {

GridFunction bracket_fH(const GridFunction& f, const GridFunction& w) {
    return dealiased_product(f, hilbert_transform(w)) - hilbert_transform(dealiased_product(f, w));
}

} // namespace

GridFunction double_commutator_minus(const GridFunction& f, const GridFunction& g) {
    require_dim(f, 1, "double_commutator_minus");
    require_same(f, g, "double_commutator_minus");
    require_zero_mean(f, "double_commutator_minus");
    require_zero_mean(g, "double_commutator_minus");
    return bracket_fH(f, frac_laplacian(g, 1.0)) - bracket_fH(g, frac_laplacian(f, 1.0));
}

GridFunction double_commutator_plus(const GridFunction& f, const GridFunction& g) {
    require_dim(f, 1, "double_commutator_plus");
    require_same(f, g, "double_commutator_plus");
    require_zero_mean(f, "double_commutator_plus");
    require_zero_mean(g, "double_commutator_plus");
    return hilbert_transform(bracket_fH(f, frac_laplacian(g, 1.0)) + bracket_fH(g, frac_laplacian(f, 1.0)));
}

double extension_riesz_rules_check(const GridFunction& f) {
    return extension_riesz_rules_check(f, TGrid::standard(f.spec()));
}

double extension_riesz_rules_check(const GridFunction& f, const TGrid& tg) {
    const GridSpec& spec = f.spec();
    auto op = std::make_shared<const ExtensionOperator>(spec, 1.0, tg);
    ExtensionField F = op->extend(f);
    double worst = 0.0;
    const double scale = std::max(l2_norm(f), 1e-300);
    for (int a = 0; a < spec.dim; ++a) {
        ExtensionField RF = op->extend(riesz_transform(f, a));
        for (int j = 0; j < tg.levels(); ++j) {
            // dt(R~_a F) = -dx_a F per mode (c = 1 under the i xi/|xi| symbol).
            const GridFunction res = RF.dt(j) + F.dx(j, a);
            worst = std::max(worst, l2_norm(res) / scale);
        }
    }
    if (spec.dim == 1) {
        ExtensionField HF = op->extend(hilbert_transform(f));
        for (int j = 0; j < tg.levels(); ++j) {
            const GridFunction r1 = HF.dt(j) + F.dx(j, 0); // H~ F_t = -F_x
            const GridFunction r2 = F.dt(j) - HF.dx(j, 0); // F_t = H~ F_x
            worst = std::max(worst, l2_norm(r1) / scale);
            worst = std::max(worst, l2_norm(r2) / scale);
        }
    }
    return worst;
}

} // namespace hx
