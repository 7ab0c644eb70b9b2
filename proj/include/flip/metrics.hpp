#pragma once

#include <optional>

#include "flip/config.hpp"
#include "flip/graph.hpp"
#include "flip/params.hpp"
#include "flip/rational.hpp"

namespace flip {

struct MetricParams {
    double eta = 0.0;       // in (0, 1/2)
    Rational delta;         // gap between the two optima, 1/264
    MetricParams() : delta(Rational(1) / 264) {}
    explicit MetricParams(double eta_) : eta(eta_), delta(Rational(1) / 264) {}
};

// eta * Delta_ratio constant used in the contraction proof: delta*Delta / (53 k).
double default_eta(int k, int max_degree);

// Weight of the lattice edge between two neighboring colorings:
// 1 - eta (1 - gamma), where gamma counts extremal configurations around the
// disagreement vertex.
double edge_weight(const NeighboringPair& pair, const MetricParams& mp);

// Shortest-path metric over the full coloring lattice (k^n states, improper
// included), by Dijkstra. Refuses instances above state_cap.
double exact_metric(const Graph& g, int k, const Coloring& a, const Coloring& b,
                    const MetricParams& mp, long long state_cap = 1 << 20);

// Exact d(a, b) via the optimal-ordering route: valid whenever eta < 1/(n+1), where
// any minimum-weight path recolors each differing vertex exactly once.
double metric_distance(const Graph& g, int k, const Coloring& a, const Coloring& b,
                       const MetricParams& mp);

// d_H - d, nonnegative; equals eta (1 - gamma) on neighboring pairs.
double d_B(const Graph& g, int k, const Coloring& a, const Coloring& b, const MetricParams& mp);

struct NablaResult {
    double total = 0.0;
    double hamming = 0.0;
    double extremal = 0.0;  // total = hamming + extremal
};

// nk * E[d(sigma', tau') - d(sigma, tau)] under one step of the greedy coupling,
// split into the Hamming part and the extremal-weight part.
NablaResult nabla(const NeighboringPair& pair, int k, const FlipParams& p,
                  const MetricParams& mp);

// Change in the extremal weight of color c caused by flipping S in both colorings;
// S must not involve the disagreement vertex. In {-2..2}.
int xi_contribution(const NeighboringPair& pair, int c, const KempeComponent& S);

}  // namespace flip
