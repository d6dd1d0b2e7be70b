#include "bisis/dynamics.hpp"
#include "bisis/generators.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace bisis;

namespace {
// oracle: per-node scalar expansion of the coupled field, summations only
void scalar_rhs(const BiState& s, const VirusParams& p1, const VirusParams& p2,
                const Graph& gA, const Graph& gB, Vector& dx, Vector& dy) {
    const int n = gA.node_count();
    dx.resize(n);
    dy.resize(n);
    for (int i = 0; i < n; ++i) {
        double sx = 0.0, sy = 0.0;
        for (int j = 0; j < n; ++j) {
            sx += gA.adjacency()(i, j) * s.x[j];
            sy += gB.adjacency()(i, j) * s.y[j];
        }
        double free = 1.0 - s.x[i] - s.y[i];
        dx[i] = p1.beta * free * sx - p1.delta * s.x[i];
        dy[i] = p2.beta * free * sy - p2.delta * s.y[i];
    }
}

BiState random_interior(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    BiState s{Vector(n), Vector(n)};
    for (int i = 0; i < n; ++i) {
        double a = unif(rng), b = unif(rng);
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        s.x[i] = a;
        s.y[i] = b;
    }
    return s;
}
}  // namespace

TEST_CASE("healthy state is a fixed point") {
    Graph g = complete_graph(4);
    VirusParams p(1.0, 1.0);
    BiState s = BiState::zero(4);
    Vector dx, dy;
    bisis_rhs(s, p, p, g, g, dx, dy);
    CHECK(dx.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dy.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix-form field matches the scalar expansion") {
    std::mt19937_64 rng(23);
    Graph gA = random_connected_graph(12, 25, rng);
    Graph gB = random_connected_graph(12, 20, rng);
    VirusParams p1(1.3, 0.7), p2(0.9, 1.1);
    for (int rep = 0; rep < 20; ++rep) {
        BiState s = random_interior(12, rng);
        Vector dx, dy, ox, oy;
        bisis_rhs(s, p1, p2, gA, gB, dx, dy);
        scalar_rhs(s, p1, p2, gA, gB, ox, oy);
        CHECK((dx - ox).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((dy - oy).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("bi-SIS field with y = 0 reduces to the single-SIS field") {
    std::mt19937_64 rng(29);
    Graph g = random_connected_graph(10, 20, rng);
    VirusParams p1(1.5, 0.8), p2(2.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector x(10);
    for (int i = 0; i < 10; ++i) x[i] = unif(rng);
    BiState s{x, Vector::Zero(10)};
    Vector dx, dy;
    bisis_rhs(s, p1, p2, g, g, dx, dy);
    CHECK(dy.cwiseAbs().maxCoeff() == 0.0);
    CHECK((dx - sis_rhs(x, p1, g)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dimension mismatch is rejected") {
    Graph g3 = complete_graph(3), g4 = complete_graph(4);
    VirusParams p(1.0, 1.0);
    Vector dx, dy;
    BiState s = BiState::zero(3);
    CHECK_THROWS_AS(bisis_rhs(s, p, p, g3, g4, dx, dy), DynamicsError);
    CHECK_THROWS_AS(sis_rhs(Vector::Zero(3), p, g4), DynamicsError);
}

TEST_CASE("integration from the origin converges immediately") {
    Graph g = complete_graph(4);
    VirusParams p(1.0, 1.0);
    auto res = integrate(BiState::zero(4), p, p, g, g);
    CHECK(res.converged);
    CHECK(res.elapsed_model_time == 0.0);
    CHECK(res.final.x.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("K4 single-virus equilibrium: regular closed form 1 - 1/(tau d)") {
    Graph g = complete_graph(4);
    IntegratorConfig cfg;
    cfg.convergence_tol = 1e-12;

    auto above = integrate_single(Vector::Constant(4, 0.5), VirusParams(1.0, 1.0), g, cfg);
    CHECK(above.converged);
    for (int i = 0; i < 4; ++i)
        CHECK(above.final.x[i] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));

    auto below = integrate_single(Vector::Constant(4, 0.5), VirusParams(0.2, 1.0), g, cfg);
    CHECK(below.converged);
    CHECK(below.final.x.maxCoeff() < 1e-8);
}

TEST_CASE("forward invariance along random trajectories") {
    std::mt19937_64 rng(31);
    Graph gA = random_connected_graph(8, 14, rng);
    Graph gB = random_connected_graph(8, 12, rng);
    VirusParams p1(2.0, 1.0), p2(1.5, 1.0);
    IntegratorConfig cfg;
    cfg.convergence_tol = 1e-8;
    cfg.keep_log = true;
    cfg.log_interval = 0.5;
    auto res = integrate(random_interior(8, rng), p1, p2, gA, gB, cfg);
    REQUIRE(res.log.has_value());
    for (const auto& s : res.log->states) CHECK(s.valid());
}

TEST_CASE("monotone ordering of trajectories (x up, y down)") {
    std::mt19937_64 rng(37);
    Graph gA = random_connected_graph(8, 16, rng);
    Graph gB = random_connected_graph(8, 13, rng);
    VirusParams p1(1.8, 1.0), p2(1.6, 1.0);
    IntegratorConfig cfg;
    cfg.convergence_tol = 1e-9;
    cfg.keep_log = true;
    cfg.max_time = 50.0;

    BiState lo = random_interior(8, rng);
    // dominated start: x scaled down, y scaled up toward the remaining mass
    BiState hi;
    hi.x = 0.9 * lo.x + 0.1 * (Vector::Ones(8) - lo.y);
    hi.y = 0.9 * lo.y;
    auto a = integrate(lo, p1, p2, gA, gB, cfg);
    auto b = integrate(hi, p1, p2, gA, gB, cfg);
    size_t common = std::min(a.log->states.size(), b.log->states.size());
    REQUIRE(common > 10);
    for (size_t k = 0; k < common; ++k) {
        CHECK((b.log->states[k].x - a.log->states[k].x).minCoeff() >= -1e-9);
        CHECK((a.log->states[k].y - b.log->states[k].y).minCoeff() >= -1e-9);
    }
}

TEST_CASE("halving dt leaves the converged state essentially unchanged") {
    Graph gA = complete_graph(5);
    Graph gB = star_graph(4);
    VirusParams p1(0.5, 1.0), p2(1.0, 1.0);
    IntegratorConfig cfg;
    cfg.convergence_tol = 1e-10;
    cfg.step = IntegratorConfig::default_step(p1, p2, gA, gB);
    BiState init{Vector::Constant(5, 0.4), Vector::Constant(5, 0.3)};
    auto coarse = integrate(init, p1, p2, gA, gB, cfg);
    cfg.step *= 0.5;
    auto fine = integrate(init, p1, p2, gA, gB, cfg);
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    double diff = std::max((coarse.final.x - fine.final.x).cwiseAbs().maxCoeff(),
                           (coarse.final.y - fine.final.y).cwiseAbs().maxCoeff());
    CHECK(diff < 10.0 * cfg.convergence_tol);
}

TEST_CASE("die-out below the single-virus threshold, competitor present or not") {
    std::mt19937_64 rng(41);
    Graph gA = random_connected_graph(10, 20, rng);
    Graph gB = random_connected_graph(10, 18, rng);
    double tau1 = 0.9 / gA.spectral_radius();
    VirusParams p1 = VirusParams::from_tau(tau1);
    VirusParams p2 = VirusParams::from_tau(1.4 / gB.spectral_radius());
    IntegratorConfig cfg;
    cfg.convergence_tol = 1e-9;
    for (int rep = 0; rep < 20; ++rep) {
        auto res = integrate(random_interior(10, rng), p1, p2, gA, gB, cfg);
        CHECK(res.final.x.maxCoeff() < 1e-6);
    }
}

TEST_CASE("trajectory CSV layout") {
    Graph g = complete_graph(3);
    VirusParams p(1.0, 1.0);
    IntegratorConfig cfg;
    cfg.keep_log = true;
    cfg.max_time = 2.0;
    cfg.convergence_tol = 1e-14;
    auto res = integrate({Vector::Constant(3, 0.2), Vector::Constant(3, 0.1)}, p, p,
                         g, g, cfg);
    std::ostringstream os;
    write_trajectory_csv(*res.log, os);
    std::string header = os.str().substr(0, os.str().find('\n'));
    CHECK(header == "t,x_0,x_1,x_2,y_0,y_1,y_2");
}

TEST_CASE("invalid initial state is rejected") {
    Graph g = complete_graph(3);
    VirusParams p(1.0, 1.0);
    BiState bad{Vector::Constant(3, 0.7), Vector::Constant(3, 0.7)};
    CHECK_THROWS_AS(integrate(bad, p, p, g, g), DynamicsError);
}
