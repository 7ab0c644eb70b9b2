#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace flip {

// Simple undirected graph with 0-based vertex ids and sorted adjacency lists.
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

    int max_degree() const;
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool has_edge(int u, int v) const;
    long long edge_count() const;
};

// A coloring assigns colors[v] in [0, k); k is passed alongside where needed.
using Coloring = std::vector<int>;

struct ListAssignment {
    std::vector<std::vector<int>> lists;  // lists[v] sorted ascending
};

// Alternating two-color component. The component anchored at (v, c) is empty when
// c equals the anchor's current color; otherwise it contains v.
struct KempeComponent {
    std::vector<int> vertices;  // sorted ascending
    int anchor_v = -1;
    int anchor_c = -1;
    int color_a = -1;  // anchor's color at extraction time
    int color_b = -1;  // the proposed color c

    int size() const { return static_cast<int>(vertices.size()); }
    bool empty() const { return vertices.empty(); }
    bool contains(int v) const;
};

// Parses "n m" followed by m lines "u v". Throws std::runtime_error naming the
// offending line on malformed input.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);
std::string save_graph(const Graph& g);

// Whitespace-separated colors, one coloring per line.
Coloring parse_coloring(const std::string& line, int n);

KempeComponent kempe_component(const Graph& g, const Coloring& sigma, int v, int c);

// Swaps the two component colors on every member vertex; empty components are no-ops.
Coloring flip(const Coloring& sigma, const KempeComponent& comp);
void flip_inplace(Coloring& sigma, const KempeComponent& comp);

bool is_proper(const Graph& g, const Coloring& sigma);

// Colors in [0, k) not present on N(v).
std::vector<int> available_colors(const Graph& g, const Coloring& sigma, int v, int k);

// One component per (vertex, color) slot, n*k entries total, empties included.
std::vector<KempeComponent> enumerate_components(const Graph& g, const Coloring& sigma, int k);

}  // namespace flip
