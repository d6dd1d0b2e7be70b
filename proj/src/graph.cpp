#include "bisis/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace bisis {

PowerIterationResult power_iteration(const Matrix& m, double tol, int max_iter) {
    const int n = static_cast<int>(m.rows());
    // iterate on m + I: for a nonnegative irreducible matrix the shifted
    // dominant eigenvalue is strictly dominant in modulus, so bipartite
    // +/-lambda pairs cannot stall the iteration
    const double shift = 1.0;
    Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
    double rq_prev = 0.0;
    double rq = 0.0;
    double diff = 0.0;
    int it = 0;
    for (it = 1; it <= max_iter; ++it) {
        Vector w = m * v + shift * v;
        double norm = w.norm();
        if (norm == 0.0)
            throw GraphError("power iteration: matrix maps iterate to zero");
        w /= norm;
        rq = (w.dot(m * w) + shift * w.dot(w)) / w.dot(w);
        v = std::move(w);
        diff = std::abs(rq - rq_prev);
        if (it > 1 && diff < tol * std::max(1.0, std::abs(rq))) {
            double vmax = v.maxCoeff();
            return {rq - shift, v / vmax, it, diff, true};
        }
        rq_prev = rq;
    }
    double vmax = v.maxCoeff();
    return {rq - shift, v / vmax, max_iter, diff, false};
}

Graph::Graph(int node_count, std::vector<std::pair<int, int>> edges,
             std::vector<long long> original_ids)
    : n_(node_count), edges_(std::move(edges)), original_ids_(std::move(original_ids)) {
    if (n_ <= 0) throw GraphError("empty graph");
    if (n_ > kMaxNodes)
        throw GraphError("graph too large for dense storage (N > " +
                         std::to_string(kMaxNodes) + ")");
    if (original_ids_.empty()) {
        original_ids_.resize(n_);
        for (int i = 0; i < n_; ++i) original_ids_[i] = i;
    }
    adj_ = Matrix::Zero(n_, n_);
    for (auto [u, v] : edges_) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_)
            throw GraphError("edge endpoint out of range");
        if (u == v) throw GraphError("self-loop");
        adj_(u, v) = 1.0;
        adj_(v, u) = 1.0;
    }

    // connectivity (BFS)
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < n_; ++v) {
            if (adj_(u, v) != 0.0 && !seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
        }
    }
    if (reached != n_) {
        int components = 1;
        for (int s = 0; s < n_; ++s) {
            if (seen[s]) continue;
            ++components;
            std::queue<int> q2;
            q2.push(s);
            seen[s] = 1;
            while (!q2.empty()) {
                int u = q2.front();
                q2.pop();
                for (int v = 0; v < n_; ++v)
                    if (adj_(u, v) != 0.0 && !seen[v]) {
                        seen[v] = 1;
                        q2.push(v);
                    }
            }
        }
        throw GraphError("graph is disconnected (" + std::to_string(components) +
                         " components)");
    }
    if (edges_.empty()) throw GraphError("graph has no edges");
}

void Graph::ensure_spectral(double tol, int max_iter) const {
    std::call_once(spectral_->once, [&] {
        auto r = power_iteration(adj_, tol, max_iter);
        if (!r.converged)
            throw GraphError("spectral radius did not converge after " +
                             std::to_string(max_iter) + " iterations (last=" +
                             std::to_string(r.value) + ", residual=" +
                             std::to_string(r.residual) + ")");
        spectral_->result = r;
    });
}

double Graph::spectral_radius(double tol, int max_iter) const {
    ensure_spectral(tol, max_iter);
    return spectral_->result->value;
}

const Vector& Graph::perron_vector(double tol, int max_iter) const {
    ensure_spectral(tol, max_iter);
    return spectral_->result->eigenvector;
}

ScaledMatrix::ScaledMatrix(const Graph& base, Vector scaling)
    : base_(&base), scaling_(std::move(scaling)) {
    if (scaling_.size() != base.node_count())
        throw GraphError("scaling vector length mismatch");
    if ((scaling_.array() <= 0.0).any())
        throw GraphError("scaling entries must be strictly positive");
    if ((scaling_.array() > 1.0).any())
        throw GraphError("scaling entries must lie in (0, 1]");
}

Matrix ScaledMatrix::materialize() const {
    return scaling_.asDiagonal() * base_->adjacency();
}

double ScaledMatrix::spectral_radius(double tol, int max_iter) const {
    auto r = power_iteration(materialize(), tol, max_iter);
    if (!r.converged)
        throw GraphError("scaled spectral radius did not converge");
    return r.value;
}

Graph parse_edge_list(std::istream& in, const std::string& name) {
    std::map<long long, int> remap;
    std::vector<long long> original_ids;
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;

    auto id_of = [&](long long raw) {
        auto it = remap.find(raw);
        if (it != remap.end()) return it->second;
        int id = static_cast<int>(original_ids.size());
        remap.emplace(raw, id);
        original_ids.push_back(raw);
        return id;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long a, b;
        if (!(ls >> a)) continue;  // blank line
        if (!(ls >> b) || a < 0 || b < 0) {
            std::string extra;
            throw GraphError(name + ": malformed edge at line " +
                             std::to_string(lineno) + ": '" + line + "'");
        }
        long long trailing;
        if (ls >> trailing)
            throw GraphError(name + ": malformed edge at line " +
                             std::to_string(lineno) + " (extra tokens)");
        if (a == b)
            throw GraphError(name + ": self-loop at line " + std::to_string(lineno));
        int u = id_of(a), v = id_of(b);
        auto key = std::minmax(u, v);
        if (seen.insert(key).second) edges.emplace_back(key.first, key.second);
    }
    if (original_ids.empty()) throw GraphError(name + ": empty graph");
    const int n = static_cast<int>(original_ids.size());
    return Graph(n, std::move(edges), std::move(original_ids));
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open edge list: " + path);
    return parse_edge_list(in, path);
}

double collatz_wielandt_upper(const Graph& g, const Vector& v) {
    if (v.size() != g.node_count())
        throw GraphError("collatz_wielandt_upper: vector length mismatch");
    if ((v.array() <= 0.0).any())
        throw GraphError("collatz_wielandt_upper: vector must be strictly positive");
    Vector av = g.adjacency() * v;
    return (av.array() / v.array()).maxCoeff();
}

}  // namespace bisis
