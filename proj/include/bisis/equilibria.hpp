#ifndef BISIS_EQUILIBRIA_HPP
#define BISIS_EQUILIBRIA_HPP

#include "bisis/dynamics.hpp"

#include <cstdint>
#include <string>

namespace bisis {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kThresholdEps = 1e-9;  // boundary tolerance for tau*lambda vs 1

struct SingleVirusEquilibrium {
    Vector xstar;
    double tau;
    double residual;  // sup-norm of the single-SIS field at xstar
    bool survived;
};

struct CoexistenceEquilibrium {
    Vector xhat;
    Vector yhat;
    double residual;  // sup-norm of the bi-SIS field
    int basin_hits = 0;
    bool refined = true;  // false if Newton diverged and the ODE limit is reported
};

enum class Regime {
    BothDie,
    Virus1Only,   // (C1)
    Virus2Only,   // (C2)
    Coexist,      // (C3)
    BelowSingleThreshold1,  // virus 1 fails its own single-SIS threshold
    BelowSingleThreshold2,
};

std::string to_string(Regime r);

struct RegimeReport {
    double t1_lambdaA;
    double t2_lambdaB;
    double t1_lambda_scaledA;  // tau1 * lambda(diag(1-y*) A)
    double t2_lambda_scaledB;  // tau2 * lambda(diag(1-x*) B)
    Regime classification;
    double margin;  // smallest |q - 1| over the deciding quantities
    SingleVirusEquilibrium xstar_eq;
    SingleVirusEquilibrium ystar_eq;
};

struct EquilibriumSet {
    std::vector<CoexistenceEquilibrium> ce;  // sorted by 1^T xhat descending
    bool degenerate = false;  // continuum suspected (measure-zero parameter set)
    int failed_starts = 0;    // trajectories that did not converge
};

struct MultiStartConfig {
    int starts = 50;
    std::uint64_t seed = 0;
    int jobs = 1;
    IntegratorConfig integrator{};
    double ode_tol = 1e-8;       // field tol for the exploration runs
    double newton_tol = 1e-13;   // target residual of the refinement
    double dedup_tol = 1e-6;     // sup-distance for identifying CE
    double interior_tol = 1e-6;  // entries below this count as boundary
};

// Positive equilibrium of the single-SIS system, or zero below threshold.
// Monotone fixed-point iteration from the all-ones vector, cross-checked
// against direct integration from 0.5*1; disagreement beyond 100*tol throws.
SingleVirusEquilibrium single_sis_equilibrium(const VirusParams& p, const Graph& g,
                                              double tol = 1e-12);

RegimeReport classify_regime(const VirusParams& p1, const VirusParams& p2,
                             const Graph& gA, const Graph& gB, double tol = 1e-12);

// Multi-start enumeration of coexistence equilibria: alpha-grid seeds
// (alpha x*, (1-alpha) y*) plus random interior points, ODE relaxation,
// then damped Newton on the exact Jacobian.
EquilibriumSet find_coexistence_equilibria(const VirusParams& p1, const VirusParams& p2,
                                           const Graph& gA, const Graph& gB,
                                           const RegimeReport& regime,
                                           const MultiStartConfig& cfg = {});

// Damped Newton on the bi-SIS field from the given state. Returns the
// refined state and its residual; refined=false if no progress was possible.
struct NewtonResult {
    BiState state;
    double residual;
    bool refined;
    int iterations;
};
NewtonResult newton_refine(const BiState& guess, const VirusParams& p1,
                           const VirusParams& p2, const Graph& gA, const Graph& gB,
                           double target_residual = 1e-13, int max_iter = 60);

// Residuals of the scalar fixed-point equations
//   sum_j a_ij xhat_j = xhat_i / (tau1 (1 - xhat_i - yhat_i))   (and the y analogue),
// evaluated by direct summation over the edge list. Returns the sup-norm
// over both families. Independent of the matrix-form field code path.
double fixed_point_equation_residual(const CoexistenceEquilibrium& ce,
                                     const VirusParams& p1, const VirusParams& p2,
                                     const Graph& gA, const Graph& gB);

}  // namespace bisis

#endif
