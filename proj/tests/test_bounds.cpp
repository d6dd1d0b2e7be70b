#include "bisis/bounds.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace bisis;

namespace {
// independent star-graph oracle: bisection on the hub/leaf reduction of the
// scalar fixed-point equations (hub value h, leaf value l, L leaves)
//   hub:  L*l = h/(tau(1-h)),   leaf:  h = l/(tau(1-l)) => l = tau h/(1+tau h)
std::pair<double, double> star_equilibrium_oracle(int leaves, double tau) {
    auto leaf = [&](double h) { return tau * h / (1.0 + tau * h); };
    auto f = [&](double h) {
        return leaves * leaf(h) - h / (tau * (1.0 - h));
    };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double h = 0.5 * (lo + hi);
    return {h, leaf(h)};
}
}  // namespace

TEST_CASE("Prop 1 is tight on K4") {
    Graph g = complete_graph(4);
    VirusParams p(1.0, 1.0);
    auto eq = single_sis_equilibrium(p, g);
    auto r = check_prop1(eq, g, p);
    CHECK(r.avg == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(r.bound == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(r.xmax == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(r.holds_lower);
    CHECK(r.holds_upper);
}

TEST_CASE("Prop 1 on the star graph, cross-checked against the reduction oracle") {
    Graph g = star_graph(9);  // lambda = 3
    VirusParams p = VirusParams::from_tau(0.5);
    auto eq = single_sis_equilibrium(p, g);
    REQUIRE(eq.survived);

    auto [hub, leaf] = star_equilibrium_oracle(9, 0.5);
    CHECK(eq.xstar[0] == doctest::Approx(hub).epsilon(1e-9));
    for (int i = 1; i <= 9; ++i)
        CHECK(eq.xstar[i] == doctest::Approx(leaf).epsilon(1e-9));

    auto r = check_prop1(eq, g, p);
    CHECK(r.bound == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.avg < r.bound);
    CHECK(r.bound <= r.xmax);
    CHECK(r.holds_lower);
    CHECK(r.holds_upper);
}

TEST_CASE("Prop 1 survives a barely-surviving virus") {
    Graph g = star_graph(9);
    double tau = (1.0 + 1e-6) / g.spectral_radius();
    VirusParams p = VirusParams::from_tau(tau);
    auto eq = single_sis_equilibrium(p, g);
    REQUIRE(eq.survived);
    auto r = check_prop1(eq, g, p);
    CHECK(r.bound == doctest::Approx(1e-6).epsilon(1e-3));
    CHECK(r.holds_lower);
    CHECK(r.holds_upper);
}

TEST_CASE("check_prop1 rejects a died-out equilibrium") {
    Graph g = complete_graph(4);
    VirusParams p = VirusParams::from_tau(0.2);
    auto eq = single_sis_equilibrium(p, g);
    CHECK_THROWS_AS(check_prop1(eq, g, p), SolverError);
}

TEST_CASE("mu/nu closed forms") {
    // degenerate reduction: xhat = 0 makes mu the plain average of yhat
    CoexistenceEquilibrium flat{Vector::Zero(4), Vector::Constant(4, 0.25), 0.0, 1,
                                true};
    auto [mu0, nu0] = mu_nu(flat);
    CHECK(mu0 == doctest::Approx(0.25));
    CHECK(nu0 == doctest::Approx(0.0));

    // symmetric K4 point xhat = yhat = 1/3
    CoexistenceEquilibrium sym{Vector::Constant(4, 1.0 / 3.0),
                               Vector::Constant(4, 1.0 / 3.0), 0.0, 1, true};
    auto [mu1, nu1] = mu_nu(sym);
    CHECK(mu1 == doctest::Approx(0.5));
    CHECK(nu1 == doctest::Approx(0.5));
}

TEST_CASE("Corollary 1 hand computation on the symmetric K4 point") {
    CoexistenceEquilibrium ce{Vector::Constant(4, 1.0 / 3.0),
                              Vector::Constant(4, 1.0 / 3.0), 0.0, 1, true};
    SingleVirusEquilibrium ex{Vector::Constant(4, 2.0 / 3.0), 1.0, 0.0, true};
    SingleVirusEquilibrium ey = ex;
    auto r = check_cor1(ce, ex, ey);
    CHECK(r.holds);
    // x*_i (1 - yhat_i) = (2/3)(2/3) = 4/9 > 1/3
    CHECK(r.margin_x[0] == doctest::Approx(4.0 / 9.0 - 1.0 / 3.0));
}

TEST_CASE("Prop 2 hand computation on the symmetric K4 point") {
    Graph g = complete_graph(4);
    CoexistenceEquilibrium ce{Vector::Constant(4, 1.0 / 3.0),
                              Vector::Constant(4, 1.0 / 3.0), 0.0, 1, true};
    VirusParams p(1.0, 1.0);
    auto r = check_prop2(ce, g, g, p, p);
    CHECK(r.lhs == doctest::Approx(2.0 / 3.0));
    CHECK(r.rhs == doctest::Approx(0.8));
    CHECK(r.margin == doctest::Approx(2.0 / 15.0));
    CHECK(r.holds);
}

TEST_CASE("Prop 2 bound is a level set of tau1 lambda(A) + tau2 lambda(B)") {
    std::mt19937_64 rng(71);
    Graph gA = random_connected_graph(12, 25, rng);
    Graph gB = random_connected_graph(12, 20, rng);
    double lamA = gA.spectral_radius(), lamB = gB.spectral_radius();
    const double k = 4.0;
    CoexistenceEquilibrium dummy{Vector::Constant(12, 0.1),
                                 Vector::Constant(12, 0.1), 0.0, 1, true};
    auto r1 = check_prop2(dummy, gA, gB, VirusParams::from_tau(1.5 / lamA),
                          VirusParams::from_tau((k - 1.5) / lamB));
    auto r2 = check_prop2(dummy, gA, gB, VirusParams::from_tau(2.3 / lamA),
                          VirusParams::from_tau((k - 2.3) / lamB));
    CHECK(r1.rhs == doctest::Approx(r2.rhs).epsilon(1e-12));
    CHECK(r1.rhs == doctest::Approx(1.0 - 1.0 / (k - 1.0)).epsilon(1e-12));
}

TEST_CASE("Corollary 1 and Prop 2 on a solved coexistence instance") {
    std::mt19937_64 rng(73);
    auto inst = bisis::testing::sample_coexist_instance(rng);
    auto set = bisis::testing::solve_ce(inst);
    REQUIRE_FALSE(set.ce.empty());
    VirusParams p1 = VirusParams::from_tau(inst.tau1);
    VirusParams p2 = VirusParams::from_tau(inst.tau2);
    for (const auto& ce : set.ce) {
        auto rep = evaluate_bounds(ce, inst.regime, inst.gA, inst.gB, p1, p2);
        CHECK(rep.all_satisfied);
        CHECK(rep.cor1.min_margin > 0.0);
        CHECK(rep.prop2.margin > 0.0);
        // averaged Corollary 1: mu below avg(y*), nu below avg(x*)
        CHECK(rep.mu < inst.regime.ystar_eq.xstar.mean());
        CHECK(rep.nu < inst.regime.xstar_eq.xstar.mean());
    }
}

TEST_CASE("monotonicity verifiers: single point is vacuous, bad order throws") {
    CoexistenceEquilibrium ce{Vector::Constant(3, 0.2), Vector::Constant(3, 0.2),
                              0.0, 1, true};
    std::vector<std::pair<double, CoexistenceEquilibrium>> one{{1.0, ce}};
    CHECK(verify_lemma1_monotonicity(one).holds);
    CHECK(verify_thm1_monotonicity(one).holds);

    std::vector<std::pair<double, CoexistenceEquilibrium>> bad{{1.0, ce}, {0.5, ce}};
    CHECK_THROWS_AS(verify_lemma1_monotonicity(bad), SolverError);
}

TEST_CASE("monotonicity verifiers flag violations") {
    auto mk = [](double x, double y) {
        return CoexistenceEquilibrium{Vector::Constant(2, x), Vector::Constant(2, y),
                                      0.0, 1, true};
    };
    std::vector<std::pair<double, CoexistenceEquilibrium>> sweep{
        {1.0, mk(0.2, 0.4)}, {1.1, mk(0.3, 0.3)}, {1.2, mk(0.25, 0.2)}};
    auto r = verify_lemma1_monotonicity(sweep);
    CHECK_FALSE(r.holds);
    CHECK(r.first_violation_index == 1);
}
