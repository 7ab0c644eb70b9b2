#pragma once

#include <cstdint>
#include <vector>

#include "flip/graph.hpp"
#include "flip/params.hpp"
#include "flip/rng.hpp"

namespace flip {

enum class ChainKind { glauber, flip, list_glauber, list_flip };

// Two equivalent ways to draw a flip move: pick an anchor slot (v, c) uniformly and
// accept its component with p_alpha/alpha, or pick among distinct components directly
// with p_alpha/(n k) each. Kernels must agree exactly.
enum class FlipFormulation { anchor_slots, distinct_components };

Coloring glauber_step(const Graph& g, const Coloring& sigma, int k, Rng& rng);

Coloring flip_step(const Graph& g, const Coloring& sigma, int k, const FlipParams& p, Rng& rng);

// True iff both component colors lie in L(u) for every member u.
bool is_flippable(const KempeComponent& comp, const ListAssignment& lists);

Coloring list_glauber_step(const Graph& g, const Coloring& sigma, const ListAssignment& lists,
                           Rng& rng);

Coloring list_flip_step(const Graph& g, const Coloring& sigma, const ListAssignment& lists,
                        const FlipParams& p, Rng& rng);

// Dense row-stochastic kernel over the enumerated coloring space: all k^n colorings,
// or the product of the lists for list chains. Improper colorings are included.
struct TransitionMatrix {
    std::vector<std::vector<int>> domain;  // domain[v] = admissible colors, ascending
    long long num_states = 0;
    std::vector<double> p;  // row-major, num_states x num_states

    double at(long long i, long long j) const { return p[i * num_states + j]; }
    long long index_of(const Coloring& sigma) const;
    Coloring state(long long index) const;

    // Left power iteration from the uniform vector.
    std::vector<double> stationary(double tol = 1e-13, long long max_iters = 1000000) const;
};

TransitionMatrix transition_matrix(const Graph& g, int k, ChainKind kind,
                                   const FlipParams* params = nullptr,
                                   const ListAssignment* lists = nullptr,
                                   FlipFormulation formulation = FlipFormulation::anchor_slots,
                                   long long state_cap = 1LL << 20);

// Total variation distance between the chain started at start_index and the kernel's
// stationary distribution, for t = 0..t_max; entry 0 equals 1 - pi(start).
std::vector<double> tv_decay(const TransitionMatrix& tm, long long start_index, int t_max);

}  // namespace flip
