#pragma once

#include <map>
#include <string>
#include <vector>

#include "flip/graph.hpp"
#include "flip/params.hpp"

namespace flip {

// Two colorings that differ at exactly one vertex. The graph is referenced, not owned.
struct NeighboringPair {
    const Graph* g = nullptr;
    Coloring sigma;
    Coloring tau;
    int v = -1;

    int sigma_v() const { return sigma[v]; }
    int tau_v() const { return tau[v]; }
};

// Validates the single-disagreement requirement and locates v.
NeighboringPair make_neighboring_pair(const Graph& g, const Coloring& sigma, const Coloring& tau);

enum class SpecialCase { none, c_is_sigma_v, c_is_tau_v };

// Local interaction data of one color c around the disagreement vertex.
//   m    = number of neighbors colored c (in both colorings), ascending order u_1..u_m
//   A, B = component sizes anchored at v toward c, in sigma and tau respectively
//   a_i  = branch size toward sigma(v) in tau at u_i, b_i = branch toward tau(v) in sigma
// Duplicate branches are zeroed for all but the smallest index, as are branches
// already owned by another color's A or B. For c = tau(v), A and the a-entries
// describe the sigma(v)-direction structure instead, and A is reported as 0; for
// c = sigma(v), symmetrically, with b_max taken over b_j - 1[j = j_star].
struct Configuration {
    int c = -1;
    int m = 0;
    int A = 0;
    int B = 0;
    std::vector<int> a;
    std::vector<int> b;
    int i_max = -1;  // smallest argmax of a (of the adjusted vector when special)
    int j_max = -1;
    int a_max = 0;
    int b_max = 0;
    SpecialCase special = SpecialCase::none;

    // "A,B;[a_1 ... a_m];[b_1 ... b_m]"
    std::string serialize() const;
    bool operator==(const Configuration& o) const;
};

// One configuration per color with m > 0, plus the two disagreement colors whenever
// they have any local structure. Keys are colors.
std::map<int, Configuration> extract_configurations(const NeighboringPair& pair);

// The four shapes (3,2;(2),(1)), (7,3;(3,3),(1,1)) and their mirrors, matched as
// multisets of branch entries.
bool is_extremal(const Configuration& cfg);

enum class StateLabel { Sing, Bad, Good, NotPresent };

StateLabel classify_state(const Configuration& cfg);

// State of one color directly from a pair; colors absent from N(v) with no structure
// report NotPresent.
StateLabel state_of_color(const NeighboringPair& pair, int c);

struct StateCounts {
    int n_sing = 0;
    int n_bad = 0;
    int n_good = 0;
};

// Tallies over all colors present around v.
StateCounts count_states(const NeighboringPair& pair);

// Fraction (|C1| + 2 |C2|) / max_degree, where C1/C2 collect colors whose
// configuration is extremal with m = 1 resp. m = 2.
double gamma_fraction(const NeighboringPair& pair);

// Same extraction against a list assignment: components that are not flippable are
// zeroed, except size-1 components which always stay.
std::map<int, Configuration> list_extract_configurations(const NeighboringPair& pair,
                                                         const ListAssignment& lists);

}  // namespace flip
