#ifndef BISIS_SWEEP_HPP
#define BISIS_SWEEP_HPP

#include "bisis/bounds.hpp"

#include <iosfwd>

namespace bisis {

struct SweepError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    enum class Axis { Tau1, Tau2 };

    std::string graph_a_path;
    std::string graph_b_path;
    Axis swept = Axis::Tau1;
    double fixed_value = 0.0;      // the tau held constant
    std::vector<double> points;    // swept tau values, strictly increasing
    double delta1 = 1.0;           // beta = tau * delta realization
    double delta2 = 1.0;
    std::uint64_t seed = 0;
    int starts = 50;
    int jobs = 1;
    bool per_node_vectors = false;  // included in JSON output only
};

// One row per (parameter point x CE); die-out points carry the surviving
// single-virus statistics in a single row with ce_count = 0.
struct SweepRecord {
    double tau1 = 0.0;
    double tau2 = 0.0;
    std::string classification;
    int ce_index = 0;
    int ce_count = 0;
    double mu = 0.0;
    double nu = 0.0;
    double avg_infected = 0.0;
    double prop1_bound_v1 = 0.0;
    double prop1_bound_v2 = 0.0;
    double prop2_lhs = std::numeric_limits<double>::quiet_NaN();
    double prop2_rhs = std::numeric_limits<double>::quiet_NaN();
    double cor1_min_margin = std::numeric_limits<double>::quiet_NaN();
    double residual = 0.0;
    bool converged = false;
    std::string error;  // per-point solver failure, sweep continues
    std::vector<double> xhat;  // populated when per_node_vectors is set
    std::vector<double> yhat;
};

// Key-value config file: `key = value`, '#' comments. Keys: graph_a,
// graph_b, sweep_param (tau1|tau2), fixed_value, sweep_lo, sweep_hi,
// sweep_points, sweep_values (comma list), delta1, delta2, seed, starts,
// jobs, per_node_vectors.
SweepSpec parse_sweep_config(std::istream& in);
SweepSpec load_sweep_config(const std::string& path);

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const Graph& gA,
                                   const Graph& gB);
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void emit_json(const std::vector<SweepRecord>& records, std::ostream& out);

}  // namespace bisis

#endif
