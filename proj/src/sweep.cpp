#include "bisis/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace bisis {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

SweepSpec parse_sweep_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SweepError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    SweepSpec spec;
    auto need = [&](const char* k) {
        auto it = kv.find(k);
        if (it == kv.end())
            throw SweepError(std::string("config missing required key: ") + k);
        return it->second;
    };
    auto get = [&](const char* k, const std::string& dflt) {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    };

    spec.graph_a_path = need("graph_a");
    spec.graph_b_path = need("graph_b");
    std::string axis = get("sweep_param", "tau1");
    if (axis == "tau1")
        spec.swept = SweepSpec::Axis::Tau1;
    else if (axis == "tau2")
        spec.swept = SweepSpec::Axis::Tau2;
    else
        throw SweepError("sweep_param must be tau1 or tau2");
    spec.fixed_value = std::stod(need("fixed_value"));
    if (kv.count("sweep_values")) {
        std::istringstream vs(kv["sweep_values"]);
        std::string tok;
        while (std::getline(vs, tok, ',')) spec.points.push_back(std::stod(trim(tok)));
    } else {
        double lo = std::stod(need("sweep_lo"));
        double hi = std::stod(need("sweep_hi"));
        int count = std::stoi(need("sweep_points"));
        if (!(lo < hi) || count < 1)
            throw SweepError("need sweep_lo < sweep_hi and sweep_points >= 1");
        if (count == 1) {
            spec.points.push_back(lo);
        } else {
            for (int i = 0; i < count; ++i)
                spec.points.push_back(lo + (hi - lo) * i / (count - 1));
        }
    }
    spec.delta1 = std::stod(get("delta1", "1"));
    spec.delta2 = std::stod(get("delta2", "1"));
    spec.seed = std::stoull(get("seed", "0"));
    spec.starts = std::stoi(get("starts", "50"));
    spec.jobs = std::stoi(get("jobs", "1"));
    spec.per_node_vectors = get("per_node_vectors", "false") == "true";
    if (spec.points.empty()) throw SweepError("empty sweep point list");
    for (size_t i = 0; i + 1 < spec.points.size(); ++i)
        if (!(spec.points[i] < spec.points[i + 1]))
            throw SweepError("sweep values must be strictly increasing");
    return spec;
}

SweepSpec load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SweepError("cannot open config: " + path);
    return parse_sweep_config(in);
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const Graph& gA,
                                   const Graph& gB) {
    std::vector<SweepRecord> records;
    std::vector<CoexistenceEquilibrium> previous_ce;

    for (size_t pi = 0; pi < spec.points.size(); ++pi) {
        double tau1 = spec.swept == SweepSpec::Axis::Tau1 ? spec.points[pi]
                                                          : spec.fixed_value;
        double tau2 = spec.swept == SweepSpec::Axis::Tau2 ? spec.points[pi]
                                                          : spec.fixed_value;
        VirusParams p1 = VirusParams::from_tau(tau1, spec.delta1);
        VirusParams p2 = VirusParams::from_tau(tau2, spec.delta2);

        SweepRecord base;
        base.tau1 = tau1;
        base.tau2 = tau2;
        try {
            auto regime = classify_regime(p1, p2, gA, gB);
            base.classification = to_string(regime.classification);
            base.prop1_bound_v1 = 1.0 - 1.0 / regime.t1_lambdaA;
            base.prop1_bound_v2 = 1.0 - 1.0 / regime.t2_lambdaB;

            if (regime.classification == Regime::Coexist) {
                MultiStartConfig ms;
                ms.starts = spec.starts;
                ms.seed = spec.seed + pi;  // per-point stream, reproducible
                ms.jobs = spec.jobs;
                auto set = find_coexistence_equilibria(p1, p2, gA, gB, regime, ms);

                // continuation: refine the previous point's CE onto this one
                for (const auto& prev : previous_ce) {
                    auto nr = newton_refine({prev.xhat, prev.yhat}, p1, p2, gA, gB,
                                            ms.newton_tol);
                    if (!nr.refined || !nr.state.valid(1e-9)) continue;
                    if (nr.state.x.minCoeff() <= ms.interior_tol ||
                        nr.state.y.minCoeff() <= ms.interior_tol)
                        continue;
                    CoexistenceEquilibrium warm{nr.state.x, nr.state.y, nr.residual,
                                                0, true};
                    bool dup = false;
                    for (auto& existing : set.ce)
                        if (std::max((existing.xhat - warm.xhat).cwiseAbs().maxCoeff(),
                                     (existing.yhat - warm.yhat).cwiseAbs().maxCoeff()) <
                            ms.dedup_tol) {
                            dup = true;
                            break;
                        }
                    if (!dup) set.ce.push_back(std::move(warm));
                }
                std::sort(set.ce.begin(), set.ce.end(),
                          [](const CoexistenceEquilibrium& a,
                             const CoexistenceEquilibrium& b) {
                              return a.xhat.sum() > b.xhat.sum();
                          });

                if (set.ce.empty()) {
                    base.error = "no coexistence equilibrium found";
                    records.push_back(base);
                    previous_ce.clear();
                    continue;
                }
                previous_ce = set.ce;
                for (size_t ci = 0; ci < set.ce.size(); ++ci) {
                    const auto& ce = set.ce[ci];
                    SweepRecord rec = base;
                    rec.ce_index = static_cast<int>(ci);
                    rec.ce_count = static_cast<int>(set.ce.size());
                    std::tie(rec.mu, rec.nu) = mu_nu(ce);
                    rec.avg_infected =
                        (ce.xhat.sum() + ce.yhat.sum()) / gA.node_count();
                    auto p2r = check_prop2(ce, gA, gB, p1, p2);
                    rec.prop2_lhs = p2r.lhs;
                    rec.prop2_rhs = p2r.rhs;
                    rec.cor1_min_margin =
                        check_cor1(ce, regime.xstar_eq, regime.ystar_eq).min_margin;
                    rec.residual = ce.residual;
                    rec.converged = ce.refined;
                    if (spec.per_node_vectors) {
                        rec.xhat.assign(ce.xhat.data(), ce.xhat.data() + ce.xhat.size());
                        rec.yhat.assign(ce.yhat.data(), ce.yhat.data() + ce.yhat.size());
                    }
                    records.push_back(std::move(rec));
                }
            } else {
                // die-out point: statistics of the surviving virus, if any
                previous_ce.clear();
                const bool v1_survives =
                    regime.classification == Regime::Virus1Only ||
                    regime.classification == Regime::BelowSingleThreshold2;
                const bool v2_survives =
                    regime.classification == Regime::Virus2Only ||
                    regime.classification == Regime::BelowSingleThreshold1;
                Vector x = v1_survives ? regime.xstar_eq.xstar
                                       : Vector::Zero(gA.node_count());
                Vector y = v2_survives ? regime.ystar_eq.xstar
                                       : Vector::Zero(gA.node_count());
                std::tie(base.mu, base.nu) = mu_nu(x, y);
                base.avg_infected = (x.sum() + y.sum()) / gA.node_count();
                base.residual = std::max(regime.xstar_eq.residual,
                                         regime.ystar_eq.residual);
                base.converged = true;
                if (spec.per_node_vectors) {
                    base.xhat.assign(x.data(), x.data() + x.size());
                    base.yhat.assign(y.data(), y.data() + y.size());
                }
                records.push_back(std::move(base));
            }
        } catch (const std::exception& e) {
            base.error = e.what();
            records.push_back(std::move(base));
            previous_ce.clear();
        }
    }
    return records;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    Graph gA = load_graph(spec.graph_a_path);
    Graph gB = load_graph(spec.graph_b_path);
    return run_sweep(spec, gA, gB);
}

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    if (records.empty()) throw SweepError("no records to emit");
    out << "tau1,tau2,classification,ce_index,ce_count,mu,nu,avg_infected,"
           "prop1_bound_v1,prop1_bound_v2,prop2_lhs,prop2_rhs,cor1_min_margin,"
           "residual,converged\n";
    auto opt = [&](double v) { return std::isnan(v) ? std::string() : fmt(v); };
    for (const auto& r : records) {
        out << fmt(r.tau1) << ',' << fmt(r.tau2) << ',' << r.classification << ','
            << r.ce_index << ',' << r.ce_count << ',' << fmt(r.mu) << ','
            << fmt(r.nu) << ',' << fmt(r.avg_infected) << ','
            << fmt(r.prop1_bound_v1) << ',' << fmt(r.prop1_bound_v2) << ','
            << opt(r.prop2_lhs) << ',' << opt(r.prop2_rhs) << ','
            << opt(r.cor1_min_margin) << ',' << fmt(r.residual) << ','
            << (r.converged ? "true" : "false") << "\n";
    }
}

void emit_json(const std::vector<SweepRecord>& records, std::ostream& out) {
    if (records.empty()) throw SweepError("no records to emit");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j{{"tau1", r.tau1},
                         {"tau2", r.tau2},
                         {"classification", r.classification},
                         {"ce_index", r.ce_index},
                         {"ce_count", r.ce_count},
                         {"mu", r.mu},
                         {"nu", r.nu},
                         {"avg_infected", r.avg_infected},
                         {"prop1_bound_v1", r.prop1_bound_v1},
                         {"prop1_bound_v2", r.prop1_bound_v2},
                         {"residual", r.residual},
                         {"converged", r.converged}};
        if (!std::isnan(r.prop2_lhs)) j["prop2_lhs"] = r.prop2_lhs;
        if (!std::isnan(r.prop2_rhs)) j["prop2_rhs"] = r.prop2_rhs;
        if (!std::isnan(r.cor1_min_margin)) j["cor1_min_margin"] = r.cor1_min_margin;
        if (!r.error.empty()) j["error"] = r.error;
        if (!r.xhat.empty()) {
            j["xhat"] = r.xhat;
            j["yhat"] = r.yhat;
        }
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << "\n";
}

}  // namespace bisis
