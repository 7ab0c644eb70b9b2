#pragma once

// Internal decomposition of the color structure around the disagreement vertex,
// shared by configuration extraction and the coupled-move construction.

#include <vector>

#include "flip/config.hpp"
#include "flip/graph.hpp"

namespace flip {
namespace detail {

// Color c with at least one c-colored neighbor, c distinct from both disagreement
// colors. Holds the actual components, the post-zeroing entry vectors and the
// argmax positions used for pairing.
struct GenericSector {
    int c = -1;
    std::vector<int> U;                     // c-colored neighbors of v, ascending
    KempeComponent F_sig;                   // component of v toward c in sigma
    KempeComponent F_tau;                   // same in tau
    std::vector<KempeComponent> aset;       // branch at u_i toward sigma(v), in tau
    std::vector<KempeComponent> bset;       // branch at u_i toward tau(v), in sigma
    std::vector<int> a;                     // |aset_i| with duplicates zeroed
    std::vector<int> b;
    int i_max = -1;                         // smallest argmax of a
    int j_max = -1;
};

// Joint structure of the two disagreement colors s = sigma(v), t = tau(v).
struct SpecialSector {
    std::vector<int> U_s, U_t;
    KempeComponent F_sig;                   // component of v toward t in sigma
    KempeComponent F_tau;                   // component of v toward s in tau
    std::vector<KempeComponent> bset;       // branch at x_j in U_s toward t, in sigma
    std::vector<int> b;                     // sizes, duplicates zeroed
    int j_star = -1;                        // smallest j whose branch contains v
    int j_max = -1;                         // smallest argmax of b_j - 1[j == j_star]
    std::vector<KempeComponent> aset;       // branch at u_i in U_t toward s, in tau
    std::vector<int> a;                     // sizes, zeroed when containing v or duplicated
    int i_max = -1;                         // smallest argmax of a
};

struct LocalStructure {
    int v = -1;
    int s = -1;  // sigma(v)
    int t = -1;  // tau(v)
    std::vector<GenericSector> generic;     // ascending by color
    SpecialSector special;
};

// Entry vectors reflect duplicate and ownership zeroing only; list-driven zeroing is
// applied by the extraction layer on top of the stored components.
LocalStructure local_structure(const NeighboringPair& pair);

// Single-sector builders for callers that only need one color's structure.
GenericSector build_generic_sector(const NeighboringPair& pair, int c, std::vector<int> U);
SpecialSector build_special_sector(const NeighboringPair& pair);

}  // namespace detail
}  // namespace flip
