#include "bisis/serialize.hpp"

namespace bisis {

namespace {
std::vector<double> to_vec(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}
}  // namespace

nlohmann::json regime_to_json(const RegimeReport& r) {
    return {{"tau1_lambda_A", r.t1_lambdaA},
            {"tau2_lambda_B", r.t2_lambdaB},
            {"tau1_lambda_scaled_A", r.t1_lambda_scaledA},
            {"tau2_lambda_scaled_B", r.t2_lambda_scaledB},
            {"classification", to_string(r.classification)},
            {"margin", r.margin}};
}

nlohmann::json equilibria_to_json(const EquilibriumSet& set, const RegimeReport& r,
                                  const Graph& gA) {
    nlohmann::json ces = nlohmann::json::array();
    for (const auto& ce : set.ce) {
        // report in original node ids' order (remap is identity-preserving)
        ces.push_back({{"xhat", to_vec(ce.xhat)},
                       {"yhat", to_vec(ce.yhat)},
                       {"residual", ce.residual},
                       {"basin_hits", ce.basin_hits},
                       {"refined", ce.refined}});
    }
    return {{"regime", regime_to_json(r)},
            {"node_ids", gA.original_ids()},
            {"xstar", to_vec(r.xstar_eq.xstar)},
            {"ystar", to_vec(r.ystar_eq.xstar)},
            {"coexistence_equilibria", std::move(ces)},
            {"degenerate", set.degenerate},
            {"failed_starts", set.failed_starts}};
}

nlohmann::json bounds_to_json(const BoundsReport& b) {
    return {{"prop1_v1",
             {{"avg", b.prop1_v1.avg},
              {"bound", b.prop1_v1.bound},
              {"xmax", b.prop1_v1.xmax},
              {"holds_lower", b.prop1_v1.holds_lower},
              {"holds_upper", b.prop1_v1.holds_upper}}},
            {"prop1_v2",
             {{"avg", b.prop1_v2.avg},
              {"bound", b.prop1_v2.bound},
              {"xmax", b.prop1_v2.xmax},
              {"holds_lower", b.prop1_v2.holds_lower},
              {"holds_upper", b.prop1_v2.holds_upper}}},
            {"cor1",
             {{"min_margin", b.cor1.min_margin}, {"holds", b.cor1.holds}}},
            {"prop2",
             {{"lhs", b.prop2.lhs},
              {"rhs", b.prop2.rhs},
              {"margin", b.prop2.margin},
              {"holds", b.prop2.holds}}},
            {"mu", b.mu},
            {"nu", b.nu},
            {"all_satisfied", b.all_satisfied}};
}

}  // namespace bisis
