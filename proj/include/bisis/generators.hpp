#ifndef BISIS_GENERATORS_HPP
#define BISIS_GENERATORS_HPP

#include "bisis/graph.hpp"

#include <cstdint>
#include <random>

namespace bisis {

// Small named fixtures.
Graph complete_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int leaves);  // hub = node 0
// Two cliques of size half joined by a single bridge edge; optionally with
// extra cross edges. Used for multi-equilibrium fixtures.
Graph two_clique_bridge(int half, int extra_cross = 0);

// Random spanning tree plus uniformly random extra edges; always connected.
Graph random_connected_graph(int n, int edge_count, std::mt19937_64& rng);

// Connected d-regular graph via the pairing model with rejection.
Graph random_regular_graph(int n, int d, std::mt19937_64& rng);

// Preferential-attachment skeleton adjusted to an exact edge count while
// preserving connectivity. Stand-in topology for AS-style graphs.
Graph as_style_graph(int n, int edge_count, std::mt19937_64& rng);

void write_edge_list(const Graph& g, const std::string& path);

// Frozen instance admitting at least two distinct coexistence equilibria;
// the graphs ship as multi-ce-a.edges / multi-ce-b.edges.
struct MultiCeInstance {
    Graph gA;
    Graph gB;
    double tau1;
    double tau2;
};
MultiCeInstance multi_ce_fixture();

}  // namespace bisis

#endif
