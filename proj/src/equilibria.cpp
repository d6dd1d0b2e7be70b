#include "bisis/equilibria.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

namespace bisis {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::BothDie: return "BOTH_DIE";
        case Regime::Virus1Only: return "VIRUS1_ONLY";
        case Regime::Virus2Only: return "VIRUS2_ONLY";
        case Regime::Coexist: return "COEXIST";
        case Regime::BelowSingleThreshold1: return "BELOW_SINGLE_THRESHOLD_1";
        case Regime::BelowSingleThreshold2: return "BELOW_SINGLE_THRESHOLD_2";
    }
    return "UNKNOWN";
}

SingleVirusEquilibrium single_sis_equilibrium(const VirusParams& p, const Graph& g,
                                              double tol) {
    const int n = g.node_count();
    const double tau = p.tau();
    const double tl = tau * g.spectral_radius();
    if (tl <= 1.0 + kThresholdEps)
        return {Vector::Zero(n), tau, 0.0, false};

    // monotone iteration x <- tau Ax / (1 + tau Ax), decreasing from 1;
    // linear rate degrades like 1/(tau lambda - 1) near the threshold,
    // so the cap scales with the gap
    Vector x = Vector::Ones(n);
    const long max_iter = std::min<long>(
        600000000L, std::max<long>(2000000L, static_cast<long>(40.0 / (tl - 1.0))));
    bool done = false;
    for (long it = 0; it < max_iter; ++it) {
        Vector ax = tau * (g.adjacency() * x);
        Vector next = ax.array() / (1.0 + ax.array());
        double change = (next - x).cwiseAbs().maxCoeff();
        x = std::move(next);
        if (change < tol) {
            done = true;
            break;
        }
    }
    if (!done)
        throw SolverError("single-SIS fixed-point iteration did not converge");

    // Newton polish; drives the residual to the roundoff floor so the
    // equilibrium stays accurate even when the spectral gap is tiny
    {
        Matrix I = Matrix::Identity(n, n);
        for (int it = 0; it < 30; ++it) {
            Vector F = sis_rhs(x, p, g);
            double res = F.cwiseAbs().maxCoeff();
            Vector ax = g.adjacency() * x;
            Matrix J = p.beta * ((Vector::Ones(n) - x).asDiagonal() * g.adjacency() -
                                 Matrix(ax.asDiagonal())) -
                       p.delta * I;
            Vector step = J.partialPivLu().solve(-F);
            if (!step.allFinite()) break;
            Vector trial = x + step;
            double tres = sis_rhs(trial, p, g).cwiseAbs().maxCoeff();
            if (tres >= res) break;
            x = std::move(trial);
        }
    }

    // cross-check against the ODE route from 0.5*1; a larger step than the
    // bi-virus default is stable here (|J| dt ~ 0.5) and keeps this cheap
    IntegratorConfig icfg;
    icfg.convergence_tol = std::max(tol / 10.0, 1e-13);
    icfg.step = 0.25 / std::max(p.beta * g.spectral_radius(), p.delta);
    auto ode = integrate_single(Vector::Constant(n, 0.5), p, g, icfg);
    if (ode.converged) {
        double gap = (ode.final.x - x).cwiseAbs().maxCoeff();
        if (gap > 100.0 * tol)
            throw SolverError("single-SIS equilibrium mismatch between fixed-point "
                              "iteration and integration (sup-diff " +
                              std::to_string(gap) + "); likely solver bug");
    }
    // a non-converged cross-check (near-threshold critical slowing) cannot
    // certify a disagreement; the Newton-polished fixed point stands

    double residual = sis_rhs(x, p, g).cwiseAbs().maxCoeff();
    return {std::move(x), tau, residual, true};
}

RegimeReport classify_regime(const VirusParams& p1, const VirusParams& p2,
                             const Graph& gA, const Graph& gB, double tol) {
    if (gA.node_count() != gB.node_count())
        throw SolverError("overlay graphs must share the node set");
    const int n = gA.node_count();
    const double t1l = p1.tau() * gA.spectral_radius();
    const double t2l = p2.tau() * gB.spectral_radius();

    auto ex = single_sis_equilibrium(p1, gA, tol);
    auto ey = single_sis_equilibrium(p2, gB, tol);

    ScaledMatrix sA(gA, Vector::Ones(n) - ey.xstar);
    ScaledMatrix sB(gB, Vector::Ones(n) - ex.xstar);
    const double s1 = p1.tau() * sA.spectral_radius();
    const double s2 = p2.tau() * sB.spectral_radius();

    RegimeReport rep{t1l, t2l, s1, s2, Regime::BothDie, 0.0,
                     std::move(ex), std::move(ey)};

    const bool v1_above = t1l > 1.0 + kThresholdEps;
    const bool v2_above = t2l > 1.0 + kThresholdEps;
    if (!v1_above && !v2_above) {
        rep.classification = Regime::BothDie;
        rep.margin = std::min(std::abs(t1l - 1.0), std::abs(t2l - 1.0));
    } else if (!v1_above) {
        rep.classification = Regime::BelowSingleThreshold1;
        rep.margin = std::min(std::abs(t1l - 1.0), std::abs(t2l - 1.0));
    } else if (!v2_above) {
        rep.classification = Regime::BelowSingleThreshold2;
        rep.margin = std::min(std::abs(t1l - 1.0), std::abs(t2l - 1.0));
    } else {
        const bool c1 = s1 > 1.0 + kThresholdEps;
        const bool c2 = s2 > 1.0 + kThresholdEps;
        if (c1 && c2)
            rep.classification = Regime::Coexist;
        else if (c1)
            rep.classification = Regime::Virus1Only;
        else if (c2)
            rep.classification = Regime::Virus2Only;
        else
            // not reachable for exact arithmetic when both taus exceed their
            // single thresholds; break the numerical tie by the larger quantity
            rep.classification = s1 >= s2 ? Regime::Virus1Only : Regime::Virus2Only;
        rep.margin = std::min({std::abs(t1l - 1.0), std::abs(t2l - 1.0),
                               std::abs(s1 - 1.0), std::abs(s2 - 1.0)});
    }
    return rep;
}

NewtonResult newton_refine(const BiState& guess, const VirusParams& p1,
                           const VirusParams& p2, const Graph& gA, const Graph& gB,
                           double target_residual, int max_iter) {
    const int n = gA.node_count();
    BiState s = guess;
    Vector fx, fy;
    bisis_rhs(s, p1, p2, gA, gB, fx, fy);
    double res = std::max(fx.cwiseAbs().maxCoeff(), fy.cwiseAbs().maxCoeff());

    Matrix J(2 * n, 2 * n);
    Vector F(2 * n);
    int it = 0;
    for (it = 0; it < max_iter && res > target_residual; ++it) {
        const Matrix& A = gA.adjacency();
        const Matrix& B = gB.adjacency();
        Vector free = Vector::Ones(n) - s.x - s.y;
        Vector ax = A * s.x;
        Vector by = B * s.y;

        J.topLeftCorner(n, n) =
            p1.beta * (free.asDiagonal() * A - Matrix(ax.asDiagonal())) -
            p1.delta * Matrix::Identity(n, n);
        J.topRightCorner(n, n) = -p1.beta * Matrix(ax.asDiagonal());
        J.bottomLeftCorner(n, n) = -p2.beta * Matrix(by.asDiagonal());
        J.bottomRightCorner(n, n) =
            p2.beta * (free.asDiagonal() * B - Matrix(by.asDiagonal())) -
            p2.delta * Matrix::Identity(n, n);
        F.head(n) = fx;
        F.tail(n) = fy;

        // rank-tolerant minimal-norm step: on a continuum of equilibria the
        // Jacobian is singular along the manifold direction, and a plain LU
        // solve stalls; the least-squares step still contracts onto it
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
        cod.setThreshold(1e-10);
        cod.compute(J);
        Vector step = cod.solve(-F);
        if (!step.allFinite()) break;

        // halve until the residual decreases
        double damp = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h, damp *= 0.5) {
            BiState trial{s.x + damp * step.head(n), s.y + damp * step.tail(n)};
            Vector tfx, tfy;
            bisis_rhs(trial, p1, p2, gA, gB, tfx, tfy);
            if (!tfx.allFinite() || !tfy.allFinite()) continue;
            double tres = std::max(tfx.cwiseAbs().maxCoeff(), tfy.cwiseAbs().maxCoeff());
            if (tres < res) {
                s = std::move(trial);
                fx = std::move(tfx);
                fy = std::move(tfy);
                res = tres;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    return {std::move(s), res, res <= target_residual * 10.0, it};
}

namespace {

std::vector<BiState> build_starts(const RegimeReport& regime, int n, int count,
                                  std::uint64_t seed) {
    std::vector<BiState> starts;
    for (int k = 1; k <= 9; ++k) {
        double alpha = 0.1 * k;
        starts.push_back({alpha * regime.xstar_eq.xstar,
                          (1.0 - alpha) * regime.ystar_eq.xstar});
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = static_cast<int>(starts.size()); k < count; ++k) {
        Vector x(n), y(n);
        for (int i = 0; i < n; ++i) {
            double a = unif(rng), b = unif(rng);
            if (a + b > 1.0) {  // reflect onto the simplex triangle
                a = 1.0 - a;
                b = 1.0 - b;
            }
            x[i] = a;
            y[i] = b;
        }
        starts.push_back({std::move(x), std::move(y)});
    }
    return starts;
}

double sup_distance(const CoexistenceEquilibrium& a, const CoexistenceEquilibrium& b) {
    return std::max((a.xhat - b.xhat).cwiseAbs().maxCoeff(),
                    (a.yhat - b.yhat).cwiseAbs().maxCoeff());
}

void parallel_over(int count, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

EquilibriumSet find_coexistence_equilibria(const VirusParams& p1, const VirusParams& p2,
                                           const Graph& gA, const Graph& gB,
                                           const RegimeReport& regime,
                                           const MultiStartConfig& cfg) {
    // coexistence needs both viruses above their single-SIS thresholds; we
    // also admit the scaled-threshold boundary (measure-zero continuum cases
    // classify as a die-out branch yet still carry interior equilibria)
    if (regime.t1_lambdaA <= 1.0 + kThresholdEps ||
        regime.t2_lambdaB <= 1.0 + kThresholdEps)
        throw SolverError(
            "find_coexistence_equilibria requires both viruses above their "
            "single-SIS thresholds");
    const int n = gA.node_count();
    auto starts = build_starts(regime, n, std::max(cfg.starts, 9), cfg.seed);

    struct Candidate {
        CoexistenceEquilibrium ce;
        bool ok = false;
    };
    std::vector<Candidate> cands(starts.size());
    std::atomic<int> failed{0};

    IntegratorConfig icfg = cfg.integrator;
    icfg.convergence_tol = cfg.ode_tol;
    icfg.keep_log = false;

    parallel_over(static_cast<int>(starts.size()), cfg.jobs, [&](int i) {
        IntegrationResult traj;
        try {
            traj = integrate(starts[i], p1, p2, gA, gB, icfg);
        } catch (const DynamicsError&) {
            failed.fetch_add(1);
            return;
        }
        auto nr = newton_refine(traj.final, p1, p2, gA, gB, cfg.newton_tol);
        CoexistenceEquilibrium ce;
        if (nr.refined && nr.state.valid(1e-9)) {
            ce.xhat = nr.state.x;
            ce.yhat = nr.state.y;
            ce.residual = nr.residual;
            ce.refined = true;
        } else if (traj.converged) {
            // fall back to the un-refined ODE limit, flagged
            ce.xhat = traj.final.x;
            ce.yhat = traj.final.y;
            ce.residual = cfg.ode_tol;
            ce.refined = false;
        } else {
            failed.fetch_add(1);
            return;
        }
        if (ce.xhat.minCoeff() <= cfg.interior_tol ||
            ce.yhat.minCoeff() <= cfg.interior_tol)
            return;  // boundary equilibrium, not a CE
        ce.basin_hits = 1;
        cands[i].ce = std::move(ce);
        cands[i].ok = true;
    });

    EquilibriumSet out;
    out.failed_starts = failed.load();
    for (auto& c : cands) {
        if (!c.ok) continue;
        bool merged = false;
        for (auto& existing : out.ce) {
            if (sup_distance(existing, c.ce) < cfg.dedup_tol) {
                existing.basin_hits += 1;
                if (c.ce.residual < existing.residual) {
                    int hits = existing.basin_hits;
                    existing = c.ce;
                    existing.basin_hits = hits;
                }
                merged = true;
                break;
            }
        }
        if (!merged) out.ce.push_back(std::move(c.ce));
    }

    // continuum suspicion: nearby but distinct CE whose midpoint refines to
    // yet another point
    for (size_t i = 0; i < out.ce.size() && !out.degenerate; ++i) {
        for (size_t j = i + 1; j < out.ce.size() && !out.degenerate; ++j) {
            double d = sup_distance(out.ce[i], out.ce[j]);
            BiState mid{0.5 * (out.ce[i].xhat + out.ce[j].xhat),
                        0.5 * (out.ce[i].yhat + out.ce[j].yhat)};
            Vector mfx, mfy;
            bisis_rhs(mid, p1, p2, gA, gB, mfx, mfy);
            double mres = std::max(mfx.cwiseAbs().maxCoeff(), mfy.cwiseAbs().maxCoeff());
            if (mres < 1e-10) {
                // midpoint of two distinct CE is itself an equilibrium: a
                // continuum segment, not isolated fixed points
                out.degenerate = true;
                break;
            }
            if (d >= 1e-3) continue;
            auto nr = newton_refine(mid, p1, p2, gA, gB, cfg.newton_tol);
            if (!nr.refined) continue;
            CoexistenceEquilibrium m{nr.state.x, nr.state.y, nr.residual, 0, true};
            if (sup_distance(m, out.ce[i]) > cfg.dedup_tol &&
                sup_distance(m, out.ce[j]) > cfg.dedup_tol)
                out.degenerate = true;
        }
    }

    std::sort(out.ce.begin(), out.ce.end(),
              [](const CoexistenceEquilibrium& a, const CoexistenceEquilibrium& b) {
                  return a.xhat.sum() > b.xhat.sum();
              });
    return out;
}

double fixed_point_equation_residual(const CoexistenceEquilibrium& ce,
                                     const VirusParams& p1, const VirusParams& p2,
                                     const Graph& gA, const Graph& gB) {
    const int n = gA.node_count();
    std::vector<double> sx(n, 0.0), sy(n, 0.0);
    for (auto [u, v] : gA.edges()) {
        sx[u] += ce.xhat[v];
        sx[v] += ce.xhat[u];
    }
    for (auto [u, v] : gB.edges()) {
        sy[u] += ce.yhat[v];
        sy[v] += ce.yhat[u];
    }
    double worst = 0.0;
    const double t1 = p1.tau(), t2 = p2.tau();
    for (int i = 0; i < n; ++i) {
        double free = 1.0 - ce.xhat[i] - ce.yhat[i];
        worst = std::max(worst, std::abs(sx[i] - ce.xhat[i] / (t1 * free)));
        worst = std::max(worst, std::abs(sy[i] - ce.yhat[i] / (t2 * free)));
    }
    return worst;
}

}  // namespace bisis
