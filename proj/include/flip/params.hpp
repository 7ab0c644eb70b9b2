#pragma once

#include <string>
#include <vector>

#include "flip/rational.hpp"

namespace flip {

inline constexpr int kDefaultNmax = 6;

// Flip acceptance probabilities p_1..p_Nmax, stored exactly. Construction enforces
// p_1 = 1, monotone non-increasing entries in [0, 1]; p_0 = 0 and p_alpha = 0 for
// alpha > Nmax are implied.
class FlipParams {
  public:
    explicit FlipParams(std::vector<Rational> values);

    int n_max() const { return static_cast<int>(values_.size()); }

    // p_alpha as an exact rational; 0 outside [1, Nmax].
    const Rational& at(int alpha) const;

    // p_alpha as a double, cached.
    double pd(int alpha) const;

    bool operator==(const FlipParams& o) const { return values_ == o.values_; }

    std::string describe() const;

    static FlipParams vigoda_eq11();
    static FlipParams dpp_obs51();
    static FlipParams cm_eq12();

    // Lines "alpha p_alpha" with rational or decimal literals; missing alphas are 0.
    static FlipParams from_file(const std::string& path);

  private:
    std::vector<Rational> values_;  // values_[i] = p_{i+1}
    std::vector<double> doubles_;
    static const Rational kZero;
};

}  // namespace flip
