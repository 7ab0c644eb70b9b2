#include "flip/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "local_structure.hpp"

namespace flip {

namespace {

using detail::GenericSector;
using detail::LocalStructure;
using detail::SpecialSector;

using FlipKey = std::pair<std::vector<int>, std::pair<int, int>>;

FlipKey key_of(const KempeComponent& comp) {
    return {comp.vertices, std::minmax(comp.color_a, comp.color_b)};
}

void push_move(std::vector<CoupledFlip>& out, KempeComponent s_sigma, KempeComponent s_tau,
               Rational mass, bool identity = false) {
    if (mass < 0) throw std::logic_error("coupling: negative move mass");
    if (mass == 0) return;
    CoupledFlip mv;
    mv.s_sigma = std::move(s_sigma);
    mv.s_tau = std::move(s_tau);
    mv.mass = std::move(mass);
    mv.identity = identity;
    out.push_back(std::move(mv));
}

// Moves of one color sector with delta_c > 0 and c distinct from both disagreement
// colors: the component at v pairs with the largest branch on each side, and the
// remaining branch masses pair index by index.
void generic_sector_moves(const GenericSector& sec, const FlipParams& p,
                          std::vector<CoupledFlip>& out) {
    const int m = static_cast<int>(sec.U.size());
    const Rational pA = p.at(sec.F_sig.size());
    const Rational pB = p.at(sec.F_tau.size());
    const int im = sec.i_max;
    const int jm = sec.j_max;
    push_move(out, sec.F_sig, sec.aset[im], pA);
    push_move(out, sec.bset[jm], sec.F_tau, pB);
    for (int i = 0; i < m; ++i) {
        Rational qi = p.at(sec.a[i]) - (i == im ? pA : Rational(0));
        Rational qpi = p.at(sec.b[i]) - (i == jm ? pB : Rational(0));
        if (qi < 0 || qpi < 0) throw std::logic_error("coupling: negative residual branch mass");
        Rational both = std::min(qi, qpi);
        push_move(out, sec.bset[i], sec.aset[i], both);
        push_move(out, KempeComponent{}, sec.aset[i], qi - both);
        push_move(out, sec.bset[i], KempeComponent{}, qpi - both);
    }
}

// Moves of the joint sector of the two disagreement colors. The component of v in
// tau pairs with the branch at the adjusted argmax (which is the component of v in
// sigma when the two sides overlap); all other branches flip one-sided.
void special_sector_moves(const SpecialSector& sp, const FlipParams& p,
                          std::vector<CoupledFlip>& out) {
    const Rational pB = p.at(sp.F_tau.size());
    if (!sp.b.empty()) {
        const int jm = sp.j_max;
        const Rational pbjm = p.at(sp.b[jm]);
        const Rational m2 = std::min(pB, pbjm);
        push_move(out, sp.bset[jm], sp.F_tau, m2);
        push_move(out, sp.bset[jm], KempeComponent{}, pbjm - m2);
        push_move(out, KempeComponent{}, sp.F_tau, pB - m2);
        for (int j = 0; j < static_cast<int>(sp.b.size()); ++j)
            if (j != jm) push_move(out, sp.bset[j], KempeComponent{}, p.at(sp.b[j]));
        if (sp.j_star < 0) push_move(out, sp.F_sig, KempeComponent{}, p.at(sp.F_sig.size()));
    } else {
        push_move(out, sp.F_sig, KempeComponent{}, p.at(sp.F_sig.size()));
        push_move(out, KempeComponent{}, sp.F_tau, pB);
    }
    for (int i = 0; i < static_cast<int>(sp.a.size()); ++i)
        if (sp.a[i] > 0) push_move(out, KempeComponent{}, sp.aset[i], p.at(sp.a[i]));
}

void check_marginals(const NeighboringPair& pair, int k, const FlipParams& p,
                     const CouplingDistribution& dist) {
    const Graph& g = *pair.g;
    std::map<FlipKey, Rational> got_s, got_t, want_s, want_t;
    for (const auto& mv : dist.moves) {
        if (!mv.s_sigma.empty()) got_s[key_of(mv.s_sigma)] += mv.mass;
        if (!mv.s_tau.empty()) got_t[key_of(mv.s_tau)] += mv.mass;
    }
    for (int x = 0; x < g.n; ++x) {
        for (int cp = 0; cp < k; ++cp) {
            KempeComponent S = kempe_component(g, pair.sigma, x, cp);
            if (!S.empty() && p.at(S.size()) > 0) want_s[key_of(S)] = p.at(S.size());
            KempeComponent T = kempe_component(g, pair.tau, x, cp);
            if (!T.empty() && p.at(T.size()) > 0) want_t[key_of(T)] = p.at(T.size());
        }
    }
    if (got_s != want_s || got_t != want_t)
        throw std::logic_error("coupling: move masses do not reproduce the chain marginals");
}

CouplingDistribution assemble(const NeighboringPair& pair, int k, const FlipParams& p) {
    const Graph& g = *pair.g;
    const int n = g.n;
    const int v = pair.v;
    LocalStructure ls = detail::local_structure(pair);
    CouplingDistribution dist;
    dist.n = n;
    dist.k = k;
    for (const auto& sec : ls.generic) generic_sector_moves(sec, p, dist.moves);
    special_sector_moves(ls.special, p, dist.moves);

    std::vector<bool> present(k, false);
    for (int u : g.adj[v]) present[pair.sigma[u]] = true;
    for (int c = 0; c < k; ++c) {
        if (c == ls.s || c == ls.t || present[c]) continue;
        push_move(dist.moves, kempe_component(g, pair.sigma, v, c),
                  kempe_component(g, pair.tau, v, c), p.at(1));
    }

    std::set<FlipKey> seen;
    for (int x = 0; x < n; ++x) {
        if (x == v) continue;
        for (int cp = 0; cp < k; ++cp) {
            if (cp == pair.sigma[x]) continue;
            KempeComponent S = kempe_component(g, pair.sigma, x, cp);
            if (S.contains(v)) continue;
            if (!seen.insert(key_of(S)).second) continue;
            KempeComponent T = kempe_component(g, pair.tau, x, cp);
            if (S.vertices == T.vertices)
                push_move(dist.moves, S, std::move(T), p.at(S.size()), true);
        }
    }

    Rational total = 0;
    for (const auto& mv : dist.moves) total += mv.mass;
    dist.noop_mass = Rational(n) * k - total;
    if (dist.noop_mass < 0) throw std::logic_error("coupling: move masses exceed one step");
    return dist;
}

void require_colors_in_range(const NeighboringPair& pair, int k) {
    for (int w = 0; w < pair.g->n; ++w) {
        if (pair.sigma[w] < 0 || pair.sigma[w] >= k || pair.tau[w] < 0 || pair.tau[w] >= k)
            throw std::invalid_argument("coupling: coloring uses a color outside [0, k)");
    }
}

int swapped_color(const KempeComponent& comp, int w, int color) {
    if (comp.empty() || !comp.contains(w)) return color;
    return color == comp.color_a ? comp.color_b : comp.color_a;
}

int hamming_delta(const NeighboringPair& pair, const CoupledFlip& mv) {
    std::vector<int> touched;
    touched.reserve(mv.s_sigma.vertices.size() + mv.s_tau.vertices.size());
    std::set_union(mv.s_sigma.vertices.begin(), mv.s_sigma.vertices.end(),
                   mv.s_tau.vertices.begin(), mv.s_tau.vertices.end(),
                   std::back_inserter(touched));
    int delta = 0;
    for (int w : touched) {
        bool was = pair.sigma[w] != pair.tau[w];
        bool now = swapped_color(mv.s_sigma, w, pair.sigma[w]) !=
                   swapped_color(mv.s_tau, w, pair.tau[w]);
        delta += static_cast<int>(now) - static_cast<int>(was);
    }
    return delta;
}

}  // namespace

CouplingDistribution greedy_coupling_distribution(const NeighboringPair& pair, int k,
                                                  const FlipParams& p) {
    require_colors_in_range(pair, k);
    CouplingDistribution dist = assemble(pair, k, p);
    check_marginals(pair, k, p, dist);
    return dist;
}

Rational expected_hamming_change_exact(const NeighboringPair& pair, int k, const FlipParams& p) {
    CouplingDistribution dist = greedy_coupling_distribution(pair, k, p);
    Rational sum = 0;
    for (const auto& mv : dist.moves) {
        if (mv.identity) continue;
        sum += mv.mass * hamming_delta(pair, mv);
    }
    return sum;
}

double expected_hamming_change(const NeighboringPair& pair, int k, const FlipParams& p) {
    Rational scaled = expected_hamming_change_exact(pair, k, p);
    return to_double(scaled / (Rational(pair.g->n) * k));
}

bool is_terminating_pair(const NeighboringPair& pair, const KempeComponent& s_sigma,
                         const KempeComponent& s_tau) {
    const Graph& g = *pair.g;
    const int v = pair.v;
    const int s = pair.sigma[v];
    const int t = pair.tau[v];
    if (!s_sigma.empty()) {
        if (s_sigma.contains(v)) return true;
        if (s_sigma.color_a == t || s_sigma.color_b == t) {
            int other = s_sigma.color_a == t ? s_sigma.color_b : s_sigma.color_a;
            for (int u : g.adj[v])
                if (pair.sigma[u] == other && s_sigma.contains(u)) return true;
        }
    }
    if (!s_tau.empty()) {
        if (s_tau.contains(v)) return true;
        if (s_tau.color_a == s || s_tau.color_b == s) {
            int other = s_tau.color_a == s ? s_tau.color_b : s_tau.color_a;
            for (int u : g.adj[v])
                if (pair.tau[u] == other && s_tau.contains(u)) return true;
        }
    }
    return false;
}

Rational terminating_mass(const NeighboringPair& pair, int k, const FlipParams& p) {
    CouplingDistribution dist = greedy_coupling_distribution(pair, k, p);
    Rational sum = 0;
    for (const auto& mv : dist.moves)
        if (is_terminating_pair(pair, mv.s_sigma, mv.s_tau)) sum += mv.mass;
    return sum;
}

namespace {

// Slot-conditional sampling state for one color sector.
struct SectorView {
    std::vector<CoupledFlip> moves;
    struct Slot {
        int x = -1;
        int cp = -1;
        int alpha = 0;  // size of the sigma-side component anchored here, 0 = none
    };
    std::vector<Slot> slots;      // lex sorted
    Rational capacity = 0;        // total sigma-hold probability across the slots
    Rational tau_only = 0;        // mass that must ride on that capacity
};

void add_anchor_slots(std::vector<SectorView::Slot>& slots, const KempeComponent& comp,
                      const Coloring& coloring) {
    for (int w : comp.vertices) {
        int cp = coloring[w] == comp.color_a ? comp.color_b : comp.color_a;
        slots.push_back({w, cp, comp.size()});
    }
}

void finish_view(SectorView& view, const FlipParams& p) {
    std::sort(view.slots.begin(), view.slots.end(),
              [](const SectorView::Slot& a, const SectorView::Slot& b) {
                  return a.x != b.x ? a.x < b.x : a.cp < b.cp;
              });
    for (const auto& sl : view.slots)
        view.capacity += sl.alpha == 0 ? Rational(1) : Rational(1) - p.at(sl.alpha) / sl.alpha;
    for (const auto& mv : view.moves)
        if (mv.s_sigma.empty()) view.tau_only += mv.mass;
}

SectorView generic_view(const NeighboringPair& pair, const GenericSector& sec,
                        const FlipParams& p) {
    SectorView view;
    generic_sector_moves(sec, p, view.moves);
    add_anchor_slots(view.slots, sec.F_sig, pair.sigma);
    for (int j = 0; j < static_cast<int>(sec.b.size()); ++j)
        if (sec.b[j] > 0) add_anchor_slots(view.slots, sec.bset[j], pair.sigma);
    finish_view(view, p);
    return view;
}

SectorView special_view(const NeighboringPair& pair, const SpecialSector& sp,
                        const FlipParams& p) {
    SectorView view;
    special_sector_moves(sp, p, view.moves);
    view.slots.push_back({pair.v, pair.sigma[pair.v], 0});
    add_anchor_slots(view.slots, sp.F_sig, pair.sigma);
    for (int j = 0; j < static_cast<int>(sp.b.size()); ++j)
        if (sp.b[j] > 0 && j != sp.j_star) add_anchor_slots(view.slots, sp.bset[j], pair.sigma);
    finish_view(view, p);
    return view;
}

double slot_hold(const SectorView::Slot& sl, const FlipParams& p) {
    return sl.alpha == 0 ? 1.0 : 1.0 - p.pd(sl.alpha) / sl.alpha;
}

struct StepOutcome {
    KempeComponent s_sigma;
    KempeComponent s_tau;
    bool moved = false;
};

StepOutcome draw_from_distribution(const NeighboringPair& pair, int k, const FlipParams& p,
                                   Rng& rng) {
    CouplingDistribution dist = greedy_coupling_distribution(pair, k, p);
    double pos = rng.next_double() * static_cast<double>(pair.g->n) * k;
    double acc = 0.0;
    for (const auto& mv : dist.moves) {
        acc += to_double(mv.mass);
        if (pos < acc) return {mv.s_sigma, mv.s_tau, true};
    }
    return {};
}

StepOutcome sample_step_impl(const NeighboringPair& pair, int k, const FlipParams& p, Rng& rng) {
    const Graph& g = *pair.g;
    const int n = g.n;
    const int v = pair.v;
    const int s = pair.sigma[v];
    const int t = pair.tau[v];
    const uint64_t slot = rng.next_int(static_cast<uint64_t>(n) * static_cast<uint64_t>(k));
    const int x = static_cast<int>(slot / static_cast<uint64_t>(k));
    const int cp = static_cast<int>(slot % static_cast<uint64_t>(k));
    const double u = rng.next_double();
    StepOutcome out;

    KempeComponent F = kempe_component(g, pair.sigma, x, cp);
    if (x != v) {
        KempeComponent G = kempe_component(g, pair.tau, x, cp);
        if (F.vertices == G.vertices && !F.contains(v)) {
            // shared component (or no component at all): identity coupling
            if (!F.empty()) {
                int alpha = F.size();
                if (u < p.pd(alpha) / alpha) {
                    out.s_sigma = std::move(F);
                    out.s_tau = std::move(G);
                    out.moved = true;
                }
            }
            return out;
        }
    }
    if (x == v && cp != s && cp != t) {
        bool present = false;
        for (int u2 : g.adj[v])
            if (pair.sigma[u2] == cp) {
                present = true;
                break;
            }
        if (!present) {
            // color absent around v: both components are {v} and flip together
            if (u < p.pd(1)) {
                out.s_tau = kempe_component(g, pair.tau, v, cp);
                out.s_sigma = std::move(F);
                out.moved = true;
            }
            return out;
        }
    }

    bool st_sector;
    int sector_c = -1;
    if (x == v) {
        st_sector = cp == s || cp == t;
        sector_c = cp;
    } else {
        int c1 = pair.sigma[x];
        st_sector = (c1 == s && cp == t) || (c1 == t && cp == s);
        sector_c = (c1 == s || c1 == t) ? cp : c1;
    }

    SectorView view;
    if (st_sector) {
        view = special_view(pair, detail::build_special_sector(pair), p);
    } else {
        std::vector<int> U;
        for (int u2 : g.adj[v])
            if (pair.sigma[u2] == sector_c) U.push_back(u2);
        view = generic_view(pair, detail::build_generic_sector(pair, sector_c, std::move(U)), p);
    }

    if (view.capacity < view.tau_only) return draw_from_distribution(pair, k, p, rng);

    const int alphaF = F.size();
    const double accept = alphaF > 0 ? p.pd(alphaF) / alphaF : 0.0;
    if (alphaF > 0 && u < accept) {
        // sigma flips F; the tau side follows the sector moves that carry F
        double target = (u / accept) * p.pd(alphaF);
        double acc = 0.0;
        const CoupledFlip* chosen = nullptr;
        FlipKey fk = key_of(F);
        for (const auto& mv : view.moves) {
            if (mv.s_sigma.empty() || key_of(mv.s_sigma) != fk) continue;
            chosen = &mv;
            acc += to_double(mv.mass);
            if (target < acc) break;
        }
        if (chosen == nullptr)
            throw std::logic_error("coupled step: flipped component has no sector move");
        out.s_sigma = std::move(F);
        out.s_tau = chosen->s_tau;
        out.moved = true;
        return out;
    }

    // sigma holds: the one-sided tau moves ride on the sector's hold probability,
    // laid out slot by slot in lex order
    double prefix = 0.0;
    bool found = false;
    for (const auto& sl : view.slots) {
        if (sl.x == x && sl.cp == cp) {
            found = true;
            break;
        }
        prefix += slot_hold(sl, p);
    }
    if (!found) throw std::logic_error("coupled step: slot not owned by its sector");
    double pos = prefix + (u - accept);
    double acc = 0.0;
    for (const auto& mv : view.moves) {
        if (!mv.s_sigma.empty()) continue;
        acc += to_double(mv.mass);
        if (pos < acc) {
            out.s_tau = mv.s_tau;
            out.moved = true;
            return out;
        }
    }
    return out;
}

}  // namespace

std::pair<Coloring, Coloring> sample_coupled_step(const NeighboringPair& pair, int k,
                                                  const FlipParams& p, Rng& rng) {
    require_colors_in_range(pair, k);
    StepOutcome oc = sample_step_impl(pair, k, p, rng);
    Coloring sig = pair.sigma;
    Coloring tau = pair.tau;
    if (oc.moved) {
        flip_inplace(sig, oc.s_sigma);
        flip_inplace(tau, oc.s_tau);
    }
    return {std::move(sig), std::move(tau)};
}

CouplingTrace run_variable_length(const NeighboringPair& pair, int k, const FlipParams& p,
                                  Rng& rng, std::optional<int> tracked_color,
                                  long long step_cap) {
    require_colors_in_range(pair, k);
    if (k <= pair.g->max_degree() + 2)
        throw std::invalid_argument("run_variable_length: needs k > max degree + 2");

    NeighboringPair cur = pair;
    std::vector<int> diffs{cur.v};
    CouplingTrace trace;
    bool stage_live = tracked_color.has_value();
    Stage prev_stage = Stage::off;
    if (stage_live) {
        switch (state_of_color(cur, *tracked_color)) {
            case StateLabel::Bad: prev_stage = Stage::bad; break;
            case StateLabel::Good: prev_stage = Stage::good; break;
            default: prev_stage = Stage::off; stage_live = false; break;
        }
    }

    for (long long t = 1; t <= step_cap; ++t) {
        StepOutcome oc = sample_step_impl(cur, k, p, rng);
        bool terminating = oc.moved && is_terminating_pair(cur, oc.s_sigma, oc.s_tau);
        if (oc.moved) {
            flip_inplace(cur.sigma, oc.s_sigma);
            flip_inplace(cur.tau, oc.s_tau);
            std::vector<int> touched;
            std::set_union(oc.s_sigma.vertices.begin(), oc.s_sigma.vertices.end(),
                           oc.s_tau.vertices.begin(), oc.s_tau.vertices.end(),
                           std::back_inserter(touched));
            for (int w : touched) {
                bool now = cur.sigma[w] != cur.tau[w];
                auto it = std::lower_bound(diffs.begin(), diffs.end(), w);
                bool was = it != diffs.end() && *it == w;
                if (now && !was) diffs.insert(it, w);
                if (!now && was) diffs.erase(it);
            }
        }
        const int d = static_cast<int>(diffs.size());
        if (d == 1) cur.v = diffs[0];

        if (stage_live) {
            StateLabel new_state =
                d == 1 ? state_of_color(cur, *tracked_color) : StateLabel::NotPresent;
            bool new_good = d == 1 && new_state == StateLabel::Good;
            Stage st = Stage::off;
            if (prev_stage == Stage::bad) {
                if (terminating) st = Stage::bad_end;
                else st = new_good ? Stage::good : Stage::bad_end;
            } else if (prev_stage == Stage::good) {
                if (terminating) st = Stage::good_end;
                else st = new_good ? Stage::good : Stage::bad_end;
            }
            StageStep rec;
            rec.state = new_state;
            rec.stage = st;
            rec.terminating = terminating;
            rec.hamming_changed = d != 1;
            trace.steps.push_back(rec);
            prev_stage = st;
            if (st == Stage::good_end || st == Stage::bad_end) stage_live = false;
        }

        if (d != 1) {
            trace.t_stop = t;
            trace.final_hamming = d;
            return trace;
        }
    }
    trace.truncated = true;
    return trace;
}

StageStats stage_statistics(const NeighboringPair& pair, int k, const FlipParams& p,
                            long long trials, Rng& rng, std::optional<int> tracked_color) {
    int c = -1;
    if (tracked_color) {
        c = *tracked_color;
    } else {
        for (const auto& [col, cfg] : extract_configurations(pair)) {
            if (classify_state(cfg) == StateLabel::Bad) {
                c = col;
                break;
            }
        }
        if (c < 0) throw std::invalid_argument("stage_statistics: no color starts in state Bad");
    }

    long long n_badgood = 0;
    long long good_steps = 0;
    long long n_goodend = 0;
    long long n_badend = 0;
    double sum_t = 0.0;
    double sum_t2 = 0.0;

    for (long long trial = 0; trial < trials; ++trial) {
        CouplingTrace trace = run_variable_length(pair, k, p, rng, c);
        if (trace.truncated) throw std::logic_error("stage_statistics: run hit the step cap");
        if (!trace.steps.empty() && trace.steps.front().state == StateLabel::Good) ++n_badgood;
        for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
            if (trace.steps[i].stage != Stage::good) continue;
            ++good_steps;
            if (trace.steps[i + 1].stage == Stage::good_end) ++n_goodend;
            if (trace.steps[i + 1].stage == Stage::bad_end) ++n_badend;
        }
        sum_t += static_cast<double>(trace.t_stop);
        sum_t2 += static_cast<double>(trace.t_stop) * static_cast<double>(trace.t_stop);
    }

    const Graph& g = *pair.g;
    const double n = g.n;
    const double delta = g.max_degree();
    auto freq_row = [](std::string name, long long count, long long denom, double bound) {
        StageRow row;
        row.transition = std::move(name);
        row.count = count;
        row.trials = denom;
        row.freq = denom > 0 ? static_cast<double>(count) / denom : 0.0;
        row.stderr_ = denom > 0 ? std::sqrt(row.freq * (1.0 - row.freq) / denom) : 0.0;
        row.bound = bound;
        return row;
    };

    StageStats stats;
    stats.rows.push_back(freq_row("bad_to_good", n_badgood, trials,
                                  4.0 * (k - delta - 1.0) / (n * k)));
    stats.rows.push_back(freq_row("good_to_goodend", n_goodend, good_steps,
                                  (k - delta - 2.0) / (n * k)));
    stats.rows.push_back(freq_row("good_to_badend", n_badend, good_steps, 5.0 / n));
    stats.mean_t_stop = trials > 0 ? sum_t / trials : 0.0;
    if (trials > 1) {
        double var = (sum_t2 - sum_t * sum_t / trials) / (trials - 1);
        stats.stderr_t_stop = std::sqrt(std::max(0.0, var) / trials);
    }
    return stats;
}

std::string StageStats::to_csv() const {
    std::ostringstream os;
    os << "transition,count,trials,freq,stderr,ref_bound\n";
    os.precision(12);
    for (const auto& row : rows) {
        os << row.transition << ',' << row.count << ',' << row.trials << ',' << row.freq << ','
           << row.stderr_ << ',' << row.bound << '\n';
    }
    return os.str();
}

long long mixing_bound(double alpha, double W, double beta, double n, double eps) {
    if (!(alpha > 0)) throw std::invalid_argument("mixing_bound: alpha must be positive");
    double rounds = std::ceil(2.0 * beta * W / alpha);
    double per_round = std::ceil(std::log(n / eps) / alpha);
    return 2 * static_cast<long long>(rounds) * static_cast<long long>(per_round);
}

}  // namespace flip
