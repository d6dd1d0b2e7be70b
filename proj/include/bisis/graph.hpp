#ifndef BISIS_GRAPH_HPP
#define BISIS_GRAPH_HPP

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bisis {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerIterationResult {
    double value;           // spectral radius estimate
    Vector eigenvector;     // positive, normalized to unit sup-norm
    int iterations;
    double residual;        // |rq_k - rq_{k-1}| at exit
    bool converged;
};

// Power iteration on a nonnegative irreducible matrix. Convergence is
// declared when successive Rayleigh quotients differ by less than tol.
PowerIterationResult power_iteration(const Matrix& m, double tol = 1e-12,
                                     int max_iter = 100000);

/// Simple undirected connected graph, dense adjacency. Supported scale
/// is N <= 2000.
class Graph {
public:
    static constexpr int kMaxNodes = 2000;

    // edges are pairs of 0-based contiguous ids; original_ids[i] is the
    // id node i carried in the input file.
    Graph(int node_count, std::vector<std::pair<int, int>> edges,
          std::vector<long long> original_ids = {});

    int node_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const Matrix& adjacency() const { return adj_; }
    const std::vector<long long>& original_ids() const { return original_ids_; }

    // Cached after first computation; safe under concurrent readers.
    double spectral_radius(double tol = 1e-12, int max_iter = 100000) const;
    const Vector& perron_vector(double tol = 1e-12, int max_iter = 100000) const;

private:
    void ensure_spectral(double tol, int max_iter) const;

    int n_;
    std::vector<std::pair<int, int>> edges_;
    Matrix adj_;
    std::vector<long long> original_ids_;

    struct SpectralCache {
        std::once_flag once;
        std::optional<PowerIterationResult> result;
    };
    // shared so Graph stays copyable/movable; the graph itself is immutable
    std::shared_ptr<SpectralCache> spectral_ = std::make_shared<SpectralCache>();
};

/// diag(scaling) * A for a strictly positive scaling vector; keeps the
/// Perron structure of a connected base graph.
class ScaledMatrix {
public:
    ScaledMatrix(const Graph& base, Vector scaling);

    const Graph& base() const { return *base_; }
    const Vector& scaling() const { return scaling_; }
    Matrix materialize() const;

    double spectral_radius(double tol = 1e-12, int max_iter = 100000) const;

private:
    const Graph* base_;
    Vector scaling_;
};

// Parses a SNAP-style edge list: "<u> <v>" per line, '#' comments and
// blank lines ignored, duplicate edges deduplicated. Rejects self-loops,
// empty and disconnected graphs.
Graph load_graph(const std::string& path);
Graph parse_edge_list(std::istream& in, const std::string& name);

// Collatz-Wielandt upper bound max_i [A v]_i / v_i >= lambda(A).
double collatz_wielandt_upper(const Graph& g, const Vector& v);

}  // namespace bisis

#endif
