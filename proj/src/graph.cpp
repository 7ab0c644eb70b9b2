#include "flip/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace flip {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& nb : g.adj) {
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
            throw std::invalid_argument("duplicate edge");
    }
    return g;
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& nb : adj) d = std::max(d, static_cast<int>(nb.size()));
    return d;
}

bool Graph::has_edge(int u, int v) const {
    const auto& nb = adj[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

long long Graph::edge_count() const {
    long long total = 0;
    for (const auto& nb : adj) total += static_cast<long long>(nb.size());
    return total / 2;
}

bool KempeComponent::contains(int v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

Graph load_graph(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_content_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_content_line()) throw std::runtime_error("graph input is empty");
    std::istringstream header(line);
    long long n = -1, m = -1;
    if (!(header >> n >> m) || n < 0 || m < 0)
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected header 'n m', got '" + line + "'");
    std::string trailing;
    if (header >> trailing)
        throw std::runtime_error("line " + std::to_string(line_no) + ": trailing token '" + trailing + "' after header");
    std::vector<std::pair<int, int>> edges;
    for (long long i = 0; i < m; ++i) {
        if (!next_content_line())
            throw std::runtime_error("expected " + std::to_string(m) + " edges, input ended after " +
                                     std::to_string(i));
        std::istringstream es(line);
        long long u = -1, v = -1;
        if (!(es >> u >> v))
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected edge 'u v', got '" + line + "'");
        if (es >> trailing)
            throw std::runtime_error("line " + std::to_string(line_no) + ": trailing token '" + trailing + "'");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::runtime_error("line " + std::to_string(line_no) + ": endpoint out of range [0," +
                                     std::to_string(n) + ")");
        if (u == v) throw std::runtime_error("line " + std::to_string(line_no) + ": self-loop");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    try {
        return Graph::from_edges(static_cast<int>(n), edges);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("graph input invalid: ") + e.what());
    }
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
    return load_graph(in);
}

std::string save_graph(const Graph& g) {
    std::ostringstream out;
    out << g.n << ' ' << g.edge_count() << '\n';
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            if (u < v) out << u << ' ' << v << '\n';
    return out.str();
}

Coloring parse_coloring(const std::string& text, int n) {
    std::istringstream in(text);
    Coloring sigma;
    long long c;
    while (in >> c) {
        if (c < 0) throw std::runtime_error("negative color in coloring");
        sigma.push_back(static_cast<int>(c));
    }
    if (static_cast<int>(sigma.size()) != n)
        throw std::runtime_error("coloring has " + std::to_string(sigma.size()) + " entries, expected " +
                                 std::to_string(n));
    return sigma;
}

KempeComponent kempe_component(const Graph& g, const Coloring& sigma, int v, int c) {
    KempeComponent comp;
    comp.anchor_v = v;
    comp.anchor_c = c;
    comp.color_a = sigma[v];
    comp.color_b = c;
    if (sigma[v] == c) return comp;
    const int s = sigma[v];
    std::vector<char> seen(g.n, 0);
    std::vector<int> queue{v};
    seen[v] = 1;
    while (!queue.empty()) {
        int x = queue.back();
        queue.pop_back();
        comp.vertices.push_back(x);
        for (int y : g.adj[x]) {
            if (seen[y]) continue;
            int cy = sigma[y];
            if ((cy == s || cy == c) && cy != sigma[x]) {
                seen[y] = 1;
                queue.push_back(y);
            }
        }
    }
    std::sort(comp.vertices.begin(), comp.vertices.end());
    return comp;
}

void flip_inplace(Coloring& sigma, const KempeComponent& comp) {
    for (int w : comp.vertices) {
        if (sigma[w] == comp.color_a)
            sigma[w] = comp.color_b;
        else if (sigma[w] == comp.color_b)
            sigma[w] = comp.color_a;
        else
            throw std::logic_error("component member carries a foreign color");
    }
}

Coloring flip(const Coloring& sigma, const KempeComponent& comp) {
    Coloring out = sigma;
    flip_inplace(out, comp);
    return out;
}

bool is_proper(const Graph& g, const Coloring& sigma) {
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            if (v > u && sigma[u] == sigma[v]) return false;
    return true;
}

std::vector<int> available_colors(const Graph& g, const Coloring& sigma, int v, int k) {
    std::vector<char> used(k, 0);
    for (int u : g.adj[v])
        if (sigma[u] < k) used[sigma[u]] = 1;
    std::vector<int> out;
    for (int c = 0; c < k; ++c)
        if (!used[c]) out.push_back(c);
    return out;
}

std::vector<KempeComponent> enumerate_components(const Graph& g, const Coloring& sigma, int k) {
    std::vector<KempeComponent> out;
    out.reserve(static_cast<size_t>(g.n) * k);
    for (int v = 0; v < g.n; ++v)
        for (int c = 0; c < k; ++c) out.push_back(kempe_component(g, sigma, v, c));
    return out;
}

}  // namespace flip
