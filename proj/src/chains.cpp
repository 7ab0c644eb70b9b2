#include "flip/chains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "flip/rational.hpp"

namespace flip {

const Rational FlipParams::kZero = Rational(0);

FlipParams::FlipParams(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("flip parameters need at least p_1");
    if (values_[0] != 1) throw std::invalid_argument("p_1 must equal 1");
    for (size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] < 0 || values_[i] > 1)
            throw std::invalid_argument("p_" + std::to_string(i + 1) + " outside [0,1]");
        if (i > 0 && values_[i] > values_[i - 1])
            throw std::invalid_argument("flip parameters must be non-increasing");
    }
    doubles_.resize(values_.size());
    for (size_t i = 0; i < values_.size(); ++i) doubles_[i] = to_double(values_[i]);
}

const Rational& FlipParams::at(int alpha) const {
    if (alpha < 1 || alpha > n_max()) return kZero;
    return values_[alpha - 1];
}

double FlipParams::pd(int alpha) const {
    if (alpha < 1 || alpha > n_max()) return 0.0;
    return doubles_[alpha - 1];
}

std::string FlipParams::describe() const {
    std::ostringstream out;
    out << "p=[";
    for (int a = 1; a <= n_max(); ++a) {
        if (a > 1) out << ", ";
        out << values_[a - 1];
    }
    out << "]";
    return out.str();
}

FlipParams FlipParams::vigoda_eq11() {
    return FlipParams({Rational(1), Rational(13, 42), Rational(1, 6), Rational(2, 21),
                       Rational(1, 21), Rational(1, 84)});
}

FlipParams FlipParams::dpp_obs51() {
    return FlipParams({Rational(1), Rational(185, 616), Rational(1, 6), Rational(47, 462),
                       Rational(9, 154), Rational(2, 77)});
}

FlipParams FlipParams::cm_eq12() {
    return FlipParams({Rational(1), parse_rational("0.296706"), parse_rational("0.166762"),
                       parse_rational("0.101790"), parse_rational("0.058475"),
                       parse_rational("0.025989")});
}

FlipParams FlipParams::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open flip parameter file '" + path + "'");
    std::map<int, Rational> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        int alpha;
        std::string value;
        if (!(ls >> alpha >> value) || alpha < 1)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected 'alpha p_alpha', got '" + line + "'");
        entries[alpha] = parse_rational(value);
    }
    if (entries.empty()) throw std::runtime_error("flip parameter file '" + path + "' is empty");
    std::vector<Rational> values(entries.rbegin()->first, Rational(0));
    for (auto& [alpha, value] : entries) values[alpha - 1] = value;
    return FlipParams(std::move(values));
}

Coloring glauber_step(const Graph& g, const Coloring& sigma, int k, Rng& rng) {
    int v = static_cast<int>(rng.next_int(g.n));
    int c = static_cast<int>(rng.next_int(k));
    for (int u : g.adj[v])
        if (sigma[u] == c) return sigma;
    Coloring out = sigma;
    out[v] = c;
    return out;
}

Coloring flip_step(const Graph& g, const Coloring& sigma, int k, const FlipParams& p, Rng& rng) {
    uint64_t slot = rng.next_int(static_cast<uint64_t>(g.n) * k);
    int v = static_cast<int>(slot / k);
    int c = static_cast<int>(slot % k);
    KempeComponent comp = kempe_component(g, sigma, v, c);
    int alpha = comp.size();
    if (alpha == 0) return sigma;
    double u = rng.next_double();
    if (u < p.pd(alpha) / alpha) return flip(sigma, comp);
    return sigma;
}

bool is_flippable(const KempeComponent& comp, const ListAssignment& lists) {
    for (int u : comp.vertices) {
        const auto& lu = lists.lists[u];
        if (!std::binary_search(lu.begin(), lu.end(), comp.color_a)) return false;
        if (!std::binary_search(lu.begin(), lu.end(), comp.color_b)) return false;
    }
    return true;
}

namespace {

void require_list_coloring(const Coloring& sigma, const ListAssignment& lists) {
    for (size_t v = 0; v < sigma.size(); ++v) {
        const auto& lv = lists.lists[v];
        if (!std::binary_search(lv.begin(), lv.end(), sigma[v]))
            throw std::invalid_argument("vertex " + std::to_string(v) +
                                        " is colored outside its list");
    }
}

}  // namespace

Coloring list_glauber_step(const Graph& g, const Coloring& sigma, const ListAssignment& lists,
                           Rng& rng) {
    require_list_coloring(sigma, lists);
    int v = static_cast<int>(rng.next_int(g.n));
    const auto& lv = lists.lists[v];
    int c = lv[rng.next_int(lv.size())];
    for (int u : g.adj[v])
        if (sigma[u] == c) return sigma;
    Coloring out = sigma;
    out[v] = c;
    return out;
}

Coloring list_flip_step(const Graph& g, const Coloring& sigma, const ListAssignment& lists,
                        const FlipParams& p, Rng& rng) {
    require_list_coloring(sigma, lists);
    int v = static_cast<int>(rng.next_int(g.n));
    const auto& lv = lists.lists[v];
    int c = lv[rng.next_int(lv.size())];
    KempeComponent comp = kempe_component(g, sigma, v, c);
    int alpha = comp.size();
    if (alpha == 0 || !is_flippable(comp, lists)) return sigma;
    double u = rng.next_double();
    if (u < p.pd(alpha) / alpha) return flip(sigma, comp);
    return sigma;
}

long long TransitionMatrix::index_of(const Coloring& sigma) const {
    long long index = 0;
    long long stride = 1;
    for (size_t v = 0; v < domain.size(); ++v) {
        const auto& dv = domain[v];
        auto it = std::lower_bound(dv.begin(), dv.end(), sigma[v]);
        if (it == dv.end() || *it != sigma[v])
            throw std::invalid_argument("coloring leaves the enumerated state space");
        index += stride * (it - dv.begin());
        stride *= static_cast<long long>(dv.size());
    }
    return index;
}

Coloring TransitionMatrix::state(long long index) const {
    Coloring sigma(domain.size());
    for (size_t v = 0; v < domain.size(); ++v) {
        long long size = static_cast<long long>(domain[v].size());
        sigma[v] = domain[v][index % size];
        index /= size;
    }
    return sigma;
}

std::vector<double> TransitionMatrix::stationary(double tol, long long max_iters) const {
    std::vector<double> pi(num_states, 1.0 / static_cast<double>(num_states));
    std::vector<double> next(num_states);
    for (long long iter = 0; iter < max_iters; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (long long i = 0; i < num_states; ++i) {
            double w = pi[i];
            if (w == 0.0) continue;
            const double* row = p.data() + i * num_states;
            for (long long j = 0; j < num_states; ++j) next[j] += w * row[j];
        }
        double drift = 0.0;
        for (long long j = 0; j < num_states; ++j) drift += std::abs(next[j] - pi[j]);
        pi.swap(next);
        if (drift <= tol) return pi;
    }
    return pi;
}

namespace {

struct ComponentKey {
    std::vector<int> vertices;
    int lo, hi;
    bool operator<(const ComponentKey& o) const {
        if (lo != o.lo) return lo < o.lo;
        if (hi != o.hi) return hi < o.hi;
        return vertices < o.vertices;
    }
};

ComponentKey key_of(const KempeComponent& comp) {
    return ComponentKey{comp.vertices, std::min(comp.color_a, comp.color_b),
                        std::max(comp.color_a, comp.color_b)};
}

}  // namespace

TransitionMatrix transition_matrix(const Graph& g, int k, ChainKind kind, const FlipParams* params,
                                   const ListAssignment* lists, FlipFormulation formulation,
                                   long long state_cap) {
    bool is_list = kind == ChainKind::list_glauber || kind == ChainKind::list_flip;
    bool is_flip_kind = kind == ChainKind::flip || kind == ChainKind::list_flip;
    if (is_flip_kind && params == nullptr)
        throw std::invalid_argument("flip kernels need flip parameters");
    if (is_list && lists == nullptr)
        throw std::invalid_argument("list kernels need a list assignment");

    TransitionMatrix tm;
    tm.domain.resize(g.n);
    for (int v = 0; v < g.n; ++v) {
        if (is_list) {
            tm.domain[v] = lists->lists[v];
            if (tm.domain[v].empty()) throw std::invalid_argument("empty color list");
        } else {
            tm.domain[v].resize(k);
            for (int c = 0; c < k; ++c) tm.domain[v][c] = c;
        }
    }
    long long states = 1;
    for (const auto& dv : tm.domain) {
        states *= static_cast<long long>(dv.size());
        if (states > state_cap)
            throw std::invalid_argument("state space exceeds cap of " + std::to_string(state_cap));
    }
    tm.num_states = states;
    tm.p.assign(states * states, 0.0);

    const Rational one(1);
    for (long long i = 0; i < states; ++i) {
        Coloring sigma = tm.state(i);
        std::map<long long, Rational> row;
        Rational stay(0);
        auto add = [&](const Coloring& target, const Rational& mass) {
            row[tm.index_of(target)] += mass;
        };
        if (kind == ChainKind::glauber || kind == ChainKind::list_glauber) {
            for (int v = 0; v < g.n; ++v) {
                const auto& dv = tm.domain[v];
                Rational slot_mass = one / (Rational(g.n) * static_cast<int>(dv.size()));
                for (int c : dv) {
                    bool blocked = false;
                    for (int u : g.adj[v])
                        if (sigma[u] == c) {
                            blocked = true;
                            break;
                        }
                    if (blocked) {
                        stay += slot_mass;
                    } else {
                        Coloring target = sigma;
                        target[v] = c;
                        add(target, slot_mass);
                    }
                }
            }
        } else if (kind == ChainKind::flip && formulation == FlipFormulation::distinct_components) {
            std::map<ComponentKey, KempeComponent> distinct;
            for (int v = 0; v < g.n; ++v)
                for (int c = 0; c < k; ++c) {
                    KempeComponent comp = kempe_component(g, sigma, v, c);
                    if (!comp.empty()) distinct.emplace(key_of(comp), comp);
                }
            Rational total(0);
            Rational denom = Rational(g.n) * k;
            for (auto& [key, comp] : distinct) {
                Rational mass = params->at(comp.size()) / denom;
                if (mass == 0) continue;
                add(flip(sigma, comp), mass);
                total += mass;
            }
            stay = one - total;
        } else {
            for (int v = 0; v < g.n; ++v) {
                const auto& dv = tm.domain[v];
                Rational slot_mass = one / (Rational(g.n) * static_cast<int>(dv.size()));
                for (int c : dv) {
                    KempeComponent comp = kempe_component(g, sigma, v, c);
                    int alpha = comp.size();
                    bool usable = alpha > 0;
                    if (usable && kind == ChainKind::list_flip) usable = is_flippable(comp, *lists);
                    if (!usable) {
                        stay += slot_mass;
                        continue;
                    }
                    Rational accept = params->at(alpha) / alpha;
                    if (accept > 0) add(flip(sigma, comp), slot_mass * accept);
                    stay += slot_mass * (one - accept);
                }
            }
        }
        row[i] += stay;
        Rational check(0);
        for (auto& [j, mass] : row) {
            if (mass < 0) throw std::logic_error("negative kernel entry");
            tm.p[i * states + j] = to_double(mass);
            check += mass;
        }
        if (check != 1) throw std::logic_error("kernel row does not sum to one");
    }
    return tm;
}

std::vector<double> tv_decay(const TransitionMatrix& tm, long long start_index, int t_max) {
    std::vector<double> pi = tm.stationary();
    std::vector<double> cur(tm.num_states, 0.0);
    cur[start_index] = 1.0;
    std::vector<double> out;
    out.reserve(t_max + 1);
    std::vector<double> next(tm.num_states);
    for (int t = 0;; ++t) {
        double tv = 0.0;
        for (long long j = 0; j < tm.num_states; ++j) tv += std::abs(cur[j] - pi[j]);
        out.push_back(tv / 2.0);
        if (t == t_max) break;
        std::fill(next.begin(), next.end(), 0.0);
        for (long long i = 0; i < tm.num_states; ++i) {
            double w = cur[i];
            if (w == 0.0) continue;
            const double* row = tm.p.data() + i * tm.num_states;
            for (long long j = 0; j < tm.num_states; ++j) next[j] += w * row[j];
        }
        cur.swap(next);
    }
    return out;
}

}  // namespace flip
