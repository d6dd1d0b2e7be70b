#include "bisis/bounds.hpp"

#include <cmath>
#include <functional>

namespace bisis {

Prop1Result check_prop1(const SingleVirusEquilibrium& eq, const Graph& g,
                        const VirusParams& p) {
    if (!eq.survived)
        throw SolverError("check_prop1 requires a surviving equilibrium (tau*lambda > 1)");
    const double n = static_cast<double>(g.node_count());
    Prop1Result r;
    r.avg = eq.xstar.sum() / n;
    r.bound = 1.0 - 1.0 / (p.tau() * g.spectral_radius());
    r.xmax = eq.xstar.maxCoeff();
    r.holds_lower = r.bound - r.avg >= -kStrictnessTol;
    r.holds_upper = r.xmax - r.bound >= -kStrictnessTol;
    return r;
}

std::pair<double, double> mu_nu(const Vector& xhat, const Vector& yhat) {
    const double n = static_cast<double>(xhat.size());
    double mu = (yhat.array() / (1.0 - xhat.array())).sum() / n;
    double nu = (xhat.array() / (1.0 - yhat.array())).sum() / n;
    return {mu, nu};
}

std::pair<double, double> mu_nu(const CoexistenceEquilibrium& ce) {
    return mu_nu(ce.xhat, ce.yhat);
}

Cor1Result check_cor1(const CoexistenceEquilibrium& ce,
                      const SingleVirusEquilibrium& ex,
                      const SingleVirusEquilibrium& ey) {
    if (!ex.survived || !ey.survived)
        throw SolverError("check_cor1 requires both single-virus equilibria to survive");
    Cor1Result r;
    r.margin_x = ex.xstar.cwiseProduct(Vector::Ones(ce.xhat.size()) - ce.yhat) - ce.xhat;
    r.margin_y = ey.xstar.cwiseProduct(Vector::Ones(ce.yhat.size()) - ce.xhat) - ce.yhat;
    r.min_margin = std::min(r.margin_x.minCoeff(), r.margin_y.minCoeff());
    r.holds = r.min_margin > -kStrictnessTol;
    return r;
}

Prop2Result check_prop2(const CoexistenceEquilibrium& ce, const Graph& gA,
                        const Graph& gB, const VirusParams& p1,
                        const VirusParams& p2) {
    const double n = static_cast<double>(gA.node_count());
    Prop2Result r;
    r.lhs = (ce.xhat.sum() + ce.yhat.sum()) / n;
    r.rhs = 1.0 - 1.0 / (p1.tau() * gA.spectral_radius() +
                         p2.tau() * gB.spectral_radius() - 1.0);
    r.margin = r.rhs - r.lhs;
    r.holds = r.margin > -kStrictnessTol;
    return r;
}

namespace {

MonotonicityResult check_sweep(
    const std::vector<std::pair<double, CoexistenceEquilibrium>>& sweep,
    const std::function<Vector(const CoexistenceEquilibrium&)>& up_quantity,
    const std::function<Vector(const CoexistenceEquilibrium&)>& down_quantity,
    const char* up_name, const char* down_name) {
    MonotonicityResult r{true, -1, ""};
    for (size_t k = 0; k + 1 < sweep.size(); ++k) {
        if (!(sweep[k + 1].first > sweep[k].first))
            throw SolverError("sweep parameter values must be strictly increasing");
        Vector du = up_quantity(sweep[k + 1].second) - up_quantity(sweep[k].second);
        Vector dd = down_quantity(sweep[k + 1].second) - down_quantity(sweep[k].second);
        if (du.minCoeff() <= -kStrictnessTol) {
            r.holds = false;
            r.first_violation_index = static_cast<int>(k);
            r.detail = std::string(up_name) + " failed to increase at interval " +
                       std::to_string(k);
            return r;
        }
        if (dd.maxCoeff() >= kStrictnessTol) {
            r.holds = false;
            r.first_violation_index = static_cast<int>(k);
            r.detail = std::string(down_name) + " failed to decrease at interval " +
                       std::to_string(k);
            return r;
        }
    }
    return r;
}

}  // namespace

MonotonicityResult verify_lemma1_monotonicity(
    const std::vector<std::pair<double, CoexistenceEquilibrium>>& sweep,
    bool increasing_x) {
    auto xq = [](const CoexistenceEquilibrium& ce) { return ce.xhat; };
    auto yq = [](const CoexistenceEquilibrium& ce) { return ce.yhat; };
    if (increasing_x) return check_sweep(sweep, xq, yq, "xhat", "yhat");
    return check_sweep(sweep, yq, xq, "yhat", "xhat");
}

MonotonicityResult verify_thm1_monotonicity(
    const std::vector<std::pair<double, CoexistenceEquilibrium>>& sweep,
    bool f_decreasing) {
    auto f = [](const CoexistenceEquilibrium& ce) {
        return Vector(ce.yhat.array() / (1.0 - ce.xhat.array()));
    };
    auto g = [](const CoexistenceEquilibrium& ce) {
        return Vector(ce.xhat.array() / (1.0 - ce.yhat.array()));
    };
    MonotonicityResult r = f_decreasing ? check_sweep(sweep, g, f, "g", "f")
                                        : check_sweep(sweep, f, g, "f", "g");
    if (!r.holds) return r;

    // aggregates mu/nu inherit the per-node direction
    for (size_t k = 0; k + 1 < sweep.size(); ++k) {
        auto [mu0, nu0] = mu_nu(sweep[k].second);
        auto [mu1, nu1] = mu_nu(sweep[k + 1].second);
        double dmu = mu1 - mu0, dnu = nu1 - nu0;
        if (!f_decreasing) std::swap(dmu, dnu);
        if (dmu >= kStrictnessTol || dnu <= -kStrictnessTol) {
            r.holds = false;
            r.first_violation_index = static_cast<int>(k);
            r.detail = "mu/nu aggregate monotonicity failed at interval " +
                       std::to_string(k);
            return r;
        }
    }
    return r;
}

BoundsReport evaluate_bounds(const CoexistenceEquilibrium& ce,
                             const RegimeReport& regime, const Graph& gA,
                             const Graph& gB, const VirusParams& p1,
                             const VirusParams& p2) {
    BoundsReport rep{
        check_prop1(regime.xstar_eq, gA, p1),
        check_prop1(regime.ystar_eq, gB, p2),
        check_cor1(ce, regime.xstar_eq, regime.ystar_eq),
        check_prop2(ce, gA, gB, p1, p2),
        0.0, 0.0, false};
    std::tie(rep.mu, rep.nu) = mu_nu(ce);
    rep.all_satisfied = rep.prop1_v1.holds_lower && rep.prop1_v1.holds_upper &&
                        rep.prop1_v2.holds_lower && rep.prop1_v2.holds_upper &&
                        rep.cor1.holds && rep.prop2.holds;
    return rep;
}

}  // namespace bisis
