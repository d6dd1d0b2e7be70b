#ifndef BISIS_DYNAMICS_HPP
#define BISIS_DYNAMICS_HPP

#include "bisis/graph.hpp"

#include <optional>

namespace bisis {

struct DynamicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VirusParams {
    double beta;
    double delta;

    VirusParams(double beta_, double delta_) : beta(beta_), delta(delta_) {
        if (beta <= 0.0 || delta <= 0.0)
            throw DynamicsError("virus rates must be strictly positive");
    }
    double tau() const { return beta / delta; }

    // realizes an effective rate with the default delta = 1 policy
    static VirusParams from_tau(double tau, double delta = 1.0) {
        return VirusParams(tau * delta, delta);
    }
};

/// Infection-probability pair (x, y); x_i + y_i <= 1 on the invariant set.
struct BiState {
    Vector x;
    Vector y;

    static BiState zero(int n) { return {Vector::Zero(n), Vector::Zero(n)}; }
    int size() const { return static_cast<int>(x.size()); }
    bool valid(double slack = 1e-12) const;
};

struct IntegratorConfig {
    double step = 0.0;                 // 0 = auto from rates/spectra
    double convergence_tol = 1e-10;    // sup-norm of the vector field
    double max_time = 1e6;
    double log_interval = 1.0;
    bool keep_log = false;

    static double default_step(const VirusParams& p1, const VirusParams& p2,
                               const Graph& gA, const Graph& gB);
};

struct TrajectoryLog {
    std::vector<double> times;
    std::vector<BiState> states;
};

struct IntegrationResult {
    BiState final;
    bool converged;
    double elapsed_model_time;
    std::optional<TrajectoryLog> log;
};

// dx = beta1 diag(1-x-y) A x - delta1 x,  dy = beta2 diag(1-x-y) B y - delta2 y
void bisis_rhs(const BiState& s, const VirusParams& p1, const VirusParams& p2,
               const Graph& gA, const Graph& gB, Vector& dx, Vector& dy);

// single-virus field: beta diag(1-x) A x - delta x
Vector sis_rhs(const Vector& x, const VirusParams& p, const Graph& g);

// Fixed-step RK4 until the field sup-norm drops below cfg.convergence_tol
// or cfg.max_time is reached. State invariants are enforced each step;
// values in [-1e-12, 0) are clamped to 0, anything worse aborts.
IntegrationResult integrate(const BiState& initial, const VirusParams& p1,
                            const VirusParams& p2, const Graph& gA, const Graph& gB,
                            const IntegratorConfig& cfg = {});

// Single-virus convenience wrapper (y pinned at 0).
IntegrationResult integrate_single(const Vector& x0, const VirusParams& p,
                                   const Graph& g, const IntegratorConfig& cfg = {});

void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);

}  // namespace bisis

#endif
