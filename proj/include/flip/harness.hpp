#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flip/config.hpp"
#include "flip/graph.hpp"
#include "flip/params.hpp"

namespace flip {

// Star-of-paths instance: v sees Delta distinctly colored neighbors, each with one
// grandchild colored sigma(v). Every color around v sits in the size-1 extremal shape.
struct PairInstance {
    Graph g;
    Coloring sigma;
    Coloring tau;
    int v = -1;

    NeighboringPair pair() const { return NeighboringPair{&g, sigma, tau, v}; }
};

PairInstance construct_G1(int delta);

// Doubled variant: colors repeat on two neighbors and each neighbor carries two
// grandchildren colored sigma(v), realizing the size-2 extremal shape; delta must
// be even.
PairInstance construct_G2(int delta);

// Uniform random graph with degrees capped at delta; sigma uniform, tau differs at a
// uniform vertex. Colorings may be improper. Deterministic in the seed.
PairInstance random_neighboring_pair(int n, int delta, int k, uint64_t seed);

// ceil((11/6 - 1/84000) * delta)
int default_k(int delta);

struct ExperimentConfig {
    std::string kind;  // "hamming_scan" | "stages" | "mixing" | "barrier"
    std::string graph_source = "g1";  // "g1" | "g2" | "random" | "file"
    std::string graph_file;
    int delta = 6;
    int n = 0;  // random source only
    int k = 0;  // 0 means default_k(delta)
    std::string preset = "vigoda_eq11";
    std::string preset_file;
    long long trials = 1000;
    uint64_t seed = 1;
    long long step_cap = 10000000;
    std::string out_path;

    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

struct ExperimentResult {
    std::string csv;
    std::string summary_json;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

FlipParams preset_by_name(const std::string& name, const std::string& file = "");

// Runs fn(i) for i in [0, count) across FLIP_WORKERS threads (default: hardware).
void parallel_for(long long count, const std::function<void(long long)>& fn);

// Connected graphs on 2..max_n vertices up to isomorphism.
std::vector<Graph> connected_graphs_up_to(int max_n);

// Representatives of neighboring pairs (sigma, tau, v) on g modulo color permutation,
// improper colorings included.
std::vector<PairInstance> pair_representatives(const Graph& g, int k);

}  // namespace flip
