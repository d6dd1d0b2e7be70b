#include "bisis/sweep.hpp"
#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace bisis;

namespace {
SweepSpec basic_spec(const bisis::testing::CoexistInstance& inst, int points,
                     double lo_scale, double hi_scale) {
    SweepSpec spec;
    spec.swept = SweepSpec::Axis::Tau1;
    spec.fixed_value = inst.tau2;
    for (int i = 0; i < points; ++i)
        spec.points.push_back(inst.tau1 * (lo_scale + (hi_scale - lo_scale) * i /
                                                          std::max(points - 1, 1)));
    spec.starts = 12;
    spec.seed = 9;
    return spec;
}
}  // namespace

TEST_CASE("config parsing: ranges, defaults, validation") {
    std::istringstream in(
        "# sweep over tau1\n"
        "graph_a = a.edges\n"
        "graph_b = b.edges\n"
        "sweep_param = tau1\n"
        "fixed_value = 0.3173\n"
        "sweep_lo = 0.06\n"
        "sweep_hi = 0.22\n"
        "sweep_points = 5\n"
        "seed = 42\n");
    auto spec = parse_sweep_config(in);
    CHECK(spec.points.size() == 5);
    CHECK(spec.points.front() == doctest::Approx(0.06));
    CHECK(spec.points.back() == doctest::Approx(0.22));
    CHECK(spec.fixed_value == doctest::Approx(0.3173));
    CHECK(spec.seed == 42);
    CHECK(spec.delta1 == 1.0);

    std::istringstream missing("graph_a = a\n");
    CHECK_THROWS_AS(parse_sweep_config(missing), SweepError);

    std::istringstream bad_order(
        "graph_a = a\ngraph_b = b\nfixed_value = 1\nsweep_values = 0.2, 0.1\n");
    CHECK_THROWS_AS(parse_sweep_config(bad_order), SweepError);
}

TEST_CASE("single-point sweep equals a single analysis run") {
    std::mt19937_64 rng(79);
    auto inst = bisis::testing::sample_coexist_instance(rng, 8, 14);
    SweepSpec spec = basic_spec(inst, 1, 1.0, 1.0);
    auto records = run_sweep(spec, inst.gA, inst.gB);
    REQUIRE_FALSE(records.empty());
    CHECK(records.front().classification == "COEXIST");
    CHECK(records.front().ce_count >= 1);
    CHECK(records.front().tau1 == doctest::Approx(inst.tau1));
    CHECK(records.front().tau2 == doctest::Approx(inst.tau2));
}

TEST_CASE("sweep records in COEXIST satisfy Corollary 1 and Prop 2") {
    std::mt19937_64 rng(83);
    auto inst = bisis::testing::sample_coexist_instance(rng, 8, 14);
    SweepSpec spec = basic_spec(inst, 4, 0.98, 1.04);
    auto records = run_sweep(spec, inst.gA, inst.gB);
    int coexist_rows = 0;
    for (const auto& r : records) {
        if (r.classification != "COEXIST") continue;
        ++coexist_rows;
        CHECK(r.cor1_min_margin > -1e-9);
        CHECK(r.prop2_lhs < r.prop2_rhs + 1e-9);
        CHECK(r.residual < 1e-10);
    }
    CHECK(coexist_rows >= 1);
}

TEST_CASE("csv header matches the column contract, determinism across runs") {
    std::mt19937_64 rng(89);
    auto inst = bisis::testing::sample_coexist_instance(rng, 8, 12);
    SweepSpec spec = basic_spec(inst, 2, 0.99, 1.02);

    auto records1 = run_sweep(spec, inst.gA, inst.gB);
    auto records2 = run_sweep(spec, inst.gA, inst.gB);
    std::ostringstream c1, c2;
    emit_csv(records1, c1);
    emit_csv(records2, c2);
    CHECK(c1.str() == c2.str());

    std::string header = c1.str().substr(0, c1.str().find('\n'));
    CHECK(header ==
          "tau1,tau2,classification,ce_index,ce_count,mu,nu,avg_infected,"
          "prop1_bound_v1,prop1_bound_v2,prop2_lhs,prop2_rhs,cor1_min_margin,"
          "residual,converged");
}

TEST_CASE("json round-trips the records losslessly") {
    std::mt19937_64 rng(97);
    auto inst = bisis::testing::sample_coexist_instance(rng, 8, 12);
    SweepSpec spec = basic_spec(inst, 1, 1.0, 1.0);
    spec.per_node_vectors = true;
    auto records = run_sweep(spec, inst.gA, inst.gB);
    std::ostringstream js;
    emit_json(records, js);
    auto parsed = nlohmann::json::parse(js.str());
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i]["tau1"].get<double>() == records[i].tau1);
        CHECK(parsed[i]["mu"].get<double>() == records[i].mu);
        if (!records[i].xhat.empty()) {
            auto xv = parsed[i]["xhat"].get<std::vector<double>>();
            CHECK(xv == records[i].xhat);
        }
    }
}

TEST_CASE("warm-started CE branch is continuous in the sweep parameter") {
    std::mt19937_64 rng(101);
    auto inst = bisis::testing::sample_coexist_instance(rng, 8, 14);
    SweepSpec spec = basic_spec(inst, 6, 0.99, 1.03);
    spec.per_node_vectors = true;
    auto records = run_sweep(spec, inst.gA, inst.gB);

    const SweepRecord* prev = nullptr;
    double prev_tau = 0.0;
    for (const auto& r : records) {
        if (r.classification != "COEXIST" || r.ce_index != 0) continue;
        if (prev) {
            double dtau = r.tau1 - prev_tau;
            double dsup = 0.0;
            for (size_t i = 0; i < r.xhat.size(); ++i) {
                dsup = std::max(dsup, std::abs(r.xhat[i] - prev->xhat[i]));
                dsup = std::max(dsup, std::abs(r.yhat[i] - prev->yhat[i]));
            }
            CHECK(dsup < 100.0 * dtau);
        }
        prev = &r;
        prev_tau = r.tau1;
    }
}

TEST_CASE("die-out points carry the surviving virus statistics") {
    std::mt19937_64 rng(103);
    Graph g = random_connected_graph(10, 20, rng);
    SweepSpec spec;
    spec.swept = SweepSpec::Axis::Tau1;
    double lam = g.spectral_radius();
    spec.fixed_value = 1.4 / lam;         // virus 2 above its single threshold
    spec.points = {0.5 / lam, 0.8 / lam}; // virus 1 below its own threshold
    auto records = run_sweep(spec, g, g);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.classification == "BELOW_SINGLE_THRESHOLD_1");
        CHECK(r.ce_count == 0);
        CHECK(r.mu == doctest::Approx(r.avg_infected).epsilon(1e-9));  // xhat = 0
        CHECK(r.nu == doctest::Approx(0.0));
        CHECK(r.avg_infected > 0.0);
        CHECK(r.converged);
    }
}
