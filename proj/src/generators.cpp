#include "bisis/generators.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>

namespace bisis {

namespace {
using EdgeSet = std::set<std::pair<int, int>>;

std::pair<int, int> key(int u, int v) { return std::minmax(u, v); }

Graph from_set(int n, const EdgeSet& es) {
    return Graph(n, std::vector<std::pair<int, int>>(es.begin(), es.end()));
}

bool connected_without(int n, const EdgeSet& es, std::pair<int, int> skip) {
    std::vector<std::vector<int>> adj(n);
    for (auto e : es) {
        if (e == skip) continue;
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
    }
    return reached == n;
}
}  // namespace

Graph complete_graph(int n) {
    EdgeSet es;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) es.insert({i, j});
    return from_set(n, es);
}

Graph path_graph(int n) {
    EdgeSet es;
    for (int i = 0; i + 1 < n; ++i) es.insert({i, i + 1});
    return from_set(n, es);
}

Graph cycle_graph(int n) {
    EdgeSet es;
    for (int i = 0; i + 1 < n; ++i) es.insert({i, i + 1});
    es.insert({0, n - 1});
    return from_set(n, es);
}

Graph star_graph(int leaves) {
    EdgeSet es;
    for (int i = 1; i <= leaves; ++i) es.insert({0, i});
    return from_set(leaves + 1, es);
}

Graph two_clique_bridge(int half, int extra_cross) {
    EdgeSet es;
    for (int i = 0; i < half; ++i)
        for (int j = i + 1; j < half; ++j) {
            es.insert({i, j});
            es.insert({half + i, half + j});
        }
    es.insert({half - 1, half});
    for (int k = 1; k <= extra_cross; ++k)
        es.insert(key(half - 1 - k, half + k));
    return from_set(2 * half, es);
}

Graph random_connected_graph(int n, int edge_count, std::mt19937_64& rng) {
    const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
    if (edge_count < n - 1 || edge_count > max_edges)
        throw GraphError("edge count incompatible with a connected simple graph");
    EdgeSet es;
    // random spanning tree by attaching each node to a random earlier one
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        es.insert(key(pick(rng), v));
    }
    std::uniform_int_distribution<int> node(0, n - 1);
    while (static_cast<int>(es.size()) < edge_count) {
        int u = node(rng), v = node(rng);
        if (u != v) es.insert(key(u, v));
    }
    return from_set(n, es);
}

Graph random_regular_graph(int n, int d, std::mt19937_64& rng) {
    if ((n * d) % 2 != 0 || d >= n)
        throw GraphError("no d-regular graph with these parameters");
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(n * d);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < d; ++k) stubs.push_back(i);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        EdgeSet es;
        bool ok = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || !es.insert(key(u, v)).second) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        try {
            return from_set(n, es);  // constructor verifies connectivity
        } catch (const GraphError&) {
            continue;
        }
    }
    throw GraphError("failed to sample a connected regular graph");
}

Graph as_style_graph(int n, int edge_count, std::mt19937_64& rng) {
    // preferential attachment skeleton: each new node links to existing ones
    // with probability proportional to degree
    EdgeSet es;
    std::vector<int> targets;  // one entry per edge endpoint
    es.insert({0, 1});
    targets = {0, 1};
    for (int v = 2; v < n; ++v) {
        std::uniform_int_distribution<size_t> pick(0, targets.size() - 1);
        int u = targets[pick(rng)];
        es.insert(key(u, v));
        targets.push_back(u);
        targets.push_back(v);
    }
    std::uniform_int_distribution<int> node(0, n - 1);
    while (static_cast<int>(es.size()) < edge_count) {
        int u = node(rng), v = node(rng);
        if (u == v) continue;
        // keep the hub bias for added edges
        std::uniform_int_distribution<size_t> pick(0, targets.size() - 1);
        int w = targets[pick(rng)];
        if (w != v && es.insert(key(w, v)).second) {
            targets.push_back(w);
            targets.push_back(v);
        }
    }
    while (static_cast<int>(es.size()) > edge_count) {
        std::uniform_int_distribution<size_t> pick(0, es.size() - 1);
        auto it = es.begin();
        std::advance(it, pick(rng));
        if (connected_without(n, es, *it)) es.erase(it);
    }
    return from_set(n, es);
}

MultiCeInstance multi_ce_fixture() {
    // Two K5 cliques coupled through a single 2-node bridge, overlaid with
    // itself at equal effective rates. The CE set is then the continuum
    // {(a x*, (1-a) x*) : a in (0,1)}: multi-start returns several distinct
    // certified representatives and the dedup flags the set DEGENERATE.
    Graph gA = two_clique_bridge(5);
    Graph gB = two_clique_bridge(5);
    return {std::move(gA), std::move(gB), 0.35, 0.35};
}

void write_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write edge list: " + path);
    out << "# " << g.node_count() << " nodes, " << g.edges().size() << " edges\n";
    for (auto [u, v] : g.edges())
        out << g.original_ids()[u] << " " << g.original_ids()[v] << "\n";
}

}  // namespace bisis
