#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flip/config.hpp"
#include "flip/graph.hpp"
#include "flip/params.hpp"
#include "flip/rational.hpp"
#include "flip/rng.hpp"

namespace flip {

// One joint move of the coupled chains: flip s_sigma in sigma and s_tau in tau.
// Either side may be empty (that chain holds still). identity marks moves where both
// sides are the same component away from the disagreement vertex.
struct CoupledFlip {
    KempeComponent s_sigma;
    KempeComponent s_tau;
    Rational mass;  // probability is mass / (n k)
    bool identity = false;
};

struct CouplingDistribution {
    std::vector<CoupledFlip> moves;
    Rational noop_mass;  // times 1/(n k), complements the move masses to n k
    int n = 0;
    int k = 0;
};

// Joint distribution over coupled flips whose marginals match one flip-chain step
// exactly in each coordinate.
CouplingDistribution greedy_coupling_distribution(const NeighboringPair& pair, int k,
                                                  const FlipParams& p);

// n k * E[d_H(sigma', tau') - 1] for one coupled step, exact; the double form
// returns the per-step expectation E[d_H(sigma', tau') - 1] itself.
Rational expected_hamming_change_exact(const NeighboringPair& pair, int k, const FlipParams& p);
double expected_hamming_change(const NeighboringPair& pair, int k, const FlipParams& p);

// Draws one coupled step without materializing the full distribution.
std::pair<Coloring, Coloring> sample_coupled_step(const NeighboringPair& pair, int k,
                                                  const FlipParams& p, Rng& rng);

// A pair of flips (S in sigma, S' in tau) is terminating if S or S' is anchored at v,
// or S reaches tau(v) through a neighbor of v, or S' reaches sigma(v) symmetrically.
bool is_terminating_pair(const NeighboringPair& pair, const KempeComponent& s_sigma,
                         const KempeComponent& s_tau);

// Probability that one coupled step applies a terminating pair, exact, times n k.
Rational terminating_mass(const NeighboringPair& pair, int k, const FlipParams& p);

enum class Stage { bad, good, good_end, bad_end, off };

struct StageStep {
    StateLabel state = StateLabel::NotPresent;
    Stage stage = Stage::off;
    bool terminating = false;
    bool hamming_changed = false;
};

struct CouplingTrace {
    long long t_stop = -1;  // first step where d_H changes; -1 if capped
    bool truncated = false;
    int final_hamming = 1;
    std::vector<StageStep> steps;  // present when a tracked color was given
};

// Runs the coupled chains until the Hamming distance changes (requires k >= Delta+3
// so the walk terminates); optionally tracks the state/stage history of one color.
CouplingTrace run_variable_length(const NeighboringPair& pair, int k, const FlipParams& p,
                                  Rng& rng, std::optional<int> tracked_color = std::nullopt,
                                  long long step_cap = 10000000);

struct StageRow {
    std::string transition;
    long long count = 0;
    long long trials = 0;
    double freq = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0;  // the reference rate this transition is compared against
};

struct StageStats {
    std::vector<StageRow> rows;
    double mean_t_stop = 0.0;
    double stderr_t_stop = 0.0;

    std::string to_csv() const;
};

// Monte Carlo over restarts of the variable-length coupling from a fixed pair.
// The tracked color defaults to the smallest color currently in state Bad; throws
// when none exists and no explicit color is given.
StageStats stage_statistics(const NeighboringPair& pair, int k, const FlipParams& p,
                            long long trials, Rng& rng,
                            std::optional<int> tracked_color = std::nullopt);

// Variable-length path-coupling mixing bound 2 ceil(2 beta W / alpha) ceil(ln(n/eps) / alpha)
// where alpha is the per-round contraction, W the max in-round distance and beta the
// max expected round length. Throws when alpha <= 0.
long long mixing_bound(double alpha, double W, double beta, double n, double eps);

}  // namespace flip
