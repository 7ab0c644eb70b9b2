#include "flip/metrics.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "flip/coupling.hpp"

namespace flip {

namespace {

int hamming(const Coloring& a, const Coloring& b) {
    int h = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++h;
    return h;
}

NeighboringPair pair_at(const Graph& g, const Coloring& sigma, const Coloring& tau, int v) {
    NeighboringPair pr;
    pr.g = &g;
    pr.sigma = sigma;
    pr.tau = tau;
    pr.v = v;
    return pr;
}

// 0 when c has no extremal configuration, otherwise the configuration size
int extremal_size(const NeighboringPair& pr, int c) {
    auto cfgs = extract_configurations(pr);
    auto it = cfgs.find(c);
    if (it == cfgs.end() || !is_extremal(it->second)) return 0;
    return it->second.m;
}

}  // namespace

double default_eta(int k, int max_degree) {
    if (k < 1 || max_degree < 1)
        throw std::invalid_argument("default_eta: k and the degree bound must be positive");
    return to_double(Rational(max_degree, 13992LL * k));
}

double edge_weight(const NeighboringPair& pair, const MetricParams& mp) {
    return 1.0 - mp.eta * (1.0 - gamma_fraction(pair));
}

double exact_metric(const Graph& g, int k, const Coloring& a, const Coloring& b,
                    const MetricParams& mp, long long state_cap) {
    if (k < 1) throw std::invalid_argument("exact_metric: k must be positive");
    if (static_cast<int>(a.size()) != g.n || static_cast<int>(b.size()) != g.n)
        throw std::invalid_argument("exact_metric: coloring size mismatch");
    long long states = 1;
    for (int i = 0; i < g.n; ++i) {
        if (states > state_cap / k) throw std::invalid_argument("exact_metric: state cap exceeded");
        states *= k;
    }
    if (states > state_cap) throw std::invalid_argument("exact_metric: state cap exceeded");

    auto encode = [&](const Coloring& c) {
        long long idx = 0;
        for (int i = g.n - 1; i >= 0; --i) idx = idx * k + c[i];
        return idx;
    };
    const long long src = encode(a);
    const long long dst = encode(b);
    if (src == dst) return 0.0;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(states, inf);
    std::vector<char> done(states, 0);
    using Item = std::pair<double, long long>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0.0;
    heap.push({0.0, src});
    Coloring cur(g.n), nxt(g.n);
    long long pow_v;
    while (!heap.empty()) {
        auto [dc, idx] = heap.top();
        heap.pop();
        if (done[idx]) continue;
        done[idx] = 1;
        if (idx == dst) return dc;
        long long rem = idx;
        for (int i = 0; i < g.n; ++i) {
            cur[i] = static_cast<int>(rem % k);
            rem /= k;
        }
        pow_v = 1;
        for (int v = 0; v < g.n; ++v) {
            for (int c = 0; c < k; ++c) {
                if (c == cur[v]) continue;
                const long long nidx = idx + (c - cur[v]) * pow_v;
                if (done[nidx]) continue;
                nxt = cur;
                nxt[v] = c;
                const double w = dc + edge_weight(pair_at(g, cur, nxt, v), mp);
                if (w < dist[nidx]) {
                    dist[nidx] = w;
                    heap.push({w, nidx});
                }
            }
            pow_v *= k;
        }
    }
    throw std::logic_error("exact_metric: target unreachable");
}

double metric_distance(const Graph& g, int k, const Coloring& a, const Coloring& b,
                       const MetricParams& mp) {
    if (!(mp.eta < 1.0 / (g.n + 1)))
        throw std::invalid_argument("metric_distance: requires eta below 1/(n+1)");
    if (static_cast<int>(a.size()) != g.n || static_cast<int>(b.size()) != g.n)
        throw std::invalid_argument("metric_distance: coloring size mismatch");
    std::vector<int> diffs;
    for (int i = 0; i < g.n; ++i)
        if (a[i] != b[i]) diffs.push_back(i);
    const int h = static_cast<int>(diffs.size());
    if (h == 0) return 0.0;
    if (h > 22) throw std::invalid_argument("metric_distance: too many differing vertices");

    // With eta < 1/(n+1) any h+1 edges outweigh any h edges, so minimum-weight
    // paths recolor each differing vertex exactly once; optimize the order.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(1u << h, inf);
    dist[0] = 0.0;
    Coloring chi(g.n), nxt(g.n);
    for (unsigned mask = 0; mask + 1 < (1u << h); ++mask) {
        if (dist[mask] == inf) continue;
        chi = a;
        for (int j = 0; j < h; ++j)
            if (mask >> j & 1) chi[diffs[j]] = b[diffs[j]];
        for (int j = 0; j < h; ++j) {
            if (mask >> j & 1) continue;
            nxt = chi;
            nxt[diffs[j]] = b[diffs[j]];
            const double w = dist[mask] + edge_weight(pair_at(g, chi, nxt, diffs[j]), mp);
            unsigned to = mask | (1u << j);
            if (w < dist[to]) dist[to] = w;
        }
    }
    return dist[(1u << h) - 1];
}

double d_B(const Graph& g, int k, const Coloring& a, const Coloring& b, const MetricParams& mp) {
    const int h = hamming(a, b);
    if (h == 0) return 0.0;
    const double d = mp.eta < 1.0 / (g.n + 1) ? metric_distance(g, k, a, b, mp)
                                              : exact_metric(g, k, a, b, mp);
    return h - d;
}

NablaResult nabla(const NeighboringPair& pair, int k, const FlipParams& p,
                  const MetricParams& mp) {
    if (!(mp.eta > 0.0 && mp.eta < 0.5))
        throw std::invalid_argument("nabla: eta must lie in (0, 1/2)");
    const Graph& g = *pair.g;
    const bool fast = mp.eta < 1.0 / (g.n + 1);
    const CouplingDistribution dist = greedy_coupling_distribution(pair, k, p);

    // a single edge is a minimum-weight path once eta < 1/2
    const double d0 = edge_weight(pair, mp);
    const double db0 = 1.0 - d0;
    NablaResult r;
    for (const CoupledFlip& mv : dist.moves) {
        const double mass = to_double(mv.mass);
        const Coloring s2 = flip(pair.sigma, mv.s_sigma);
        const Coloring t2 = flip(pair.tau, mv.s_tau);
        const int h2 = hamming(s2, t2);
        double d2;
        if (h2 == 0)
            d2 = 0.0;
        else if (h2 == 1)
            d2 = edge_weight(make_neighboring_pair(g, s2, t2), mp);
        else
            d2 = fast ? metric_distance(g, k, s2, t2, mp) : exact_metric(g, k, s2, t2, mp);
        r.total += mass * (d2 - d0);
        r.hamming += mass * (h2 - 1);
        r.extremal += mass * (db0 - (h2 - d2));
    }
    return r;
}

int xi_contribution(const NeighboringPair& pair, int c, const KempeComponent& S) {
    if (S.contains(pair.v))
        throw std::invalid_argument("xi_contribution: component involves the disagreement vertex");
    const int before = extremal_size(pair, c);
    NeighboringPair after = pair;
    flip_inplace(after.sigma, S);
    flip_inplace(after.tau, S);
    const int now = extremal_size(after, c);
    if (before == now) return 0;
    if (now == 0) return -before;
    if (before == 0) return now;
    return now > before ? 1 : -1;
}

}  // namespace flip
