#include "flip/config.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "flip/chains.hpp"
#include "local_structure.hpp"

namespace flip {

NeighboringPair make_neighboring_pair(const Graph& g, const Coloring& sigma, const Coloring& tau) {
    if (static_cast<int>(sigma.size()) != g.n || static_cast<int>(tau.size()) != g.n)
        throw std::invalid_argument("make_neighboring_pair: coloring size does not match graph");
    int v = -1;
    for (int w = 0; w < g.n; ++w) {
        if (sigma[w] != tau[w]) {
            if (v >= 0) throw std::invalid_argument("make_neighboring_pair: colorings differ at more than one vertex");
            v = w;
        }
    }
    if (v < 0) throw std::invalid_argument("make_neighboring_pair: colorings are identical");
    NeighboringPair pair;
    pair.g = &g;
    pair.sigma = sigma;
    pair.tau = tau;
    pair.v = v;
    return pair;
}

namespace detail {

namespace {

int argmax_smallest(const std::vector<int>& x) {
    if (x.empty()) return -1;
    int best = 0;
    for (int i = 1; i < static_cast<int>(x.size()); ++i)
        if (x[i] > x[best]) best = i;
    return best;
}

// Entry vector for a branch list: zero for repeats of an earlier identical vertex
// set, and optionally for branches that run through v.
std::vector<int> branch_entries(const std::vector<KempeComponent>& comps, bool zero_if_contains,
                                int v) {
    std::vector<int> out(comps.size(), 0);
    for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
        if (zero_if_contains && comps[i].contains(v)) continue;
        bool dup = false;
        for (int j = 0; j < i && !dup; ++j)
            if (comps[j].vertices == comps[i].vertices) dup = true;
        if (!dup) out[i] = comps[i].size();
    }
    return out;
}

}  // namespace

// Builds the structure of one color c not equal to either disagreement color.
GenericSector build_generic_sector(const NeighboringPair& pair, int c, std::vector<int> U) {
    const Graph& g = *pair.g;
    const int v = pair.v;
    GenericSector sec;
    sec.c = c;
    sec.U = std::move(U);
    sec.F_sig = kempe_component(g, pair.sigma, v, c);
    sec.F_tau = kempe_component(g, pair.tau, v, c);
    for (int u : sec.U) {
        sec.aset.push_back(kempe_component(g, pair.tau, u, pair.sigma[v]));
        sec.bset.push_back(kempe_component(g, pair.sigma, u, pair.tau[v]));
    }
    sec.a = branch_entries(sec.aset, false, v);
    sec.b = branch_entries(sec.bset, false, v);
    sec.i_max = argmax_smallest(sec.a);
    sec.j_max = argmax_smallest(sec.b);
    return sec;
}

SpecialSector build_special_sector(const NeighboringPair& pair) {
    const Graph& g = *pair.g;
    const int v = pair.v;
    const int s = pair.sigma[v];
    const int t = pair.tau[v];

    SpecialSector sp;
    for (int u : g.adj[v]) {
        if (pair.sigma[u] == s) sp.U_s.push_back(u);
        if (pair.sigma[u] == t) sp.U_t.push_back(u);
    }
    sp.F_sig = kempe_component(g, pair.sigma, v, t);
    sp.F_tau = kempe_component(g, pair.tau, v, s);
    for (int x : sp.U_s) sp.bset.push_back(kempe_component(g, pair.sigma, x, t));
    for (int u : sp.U_t) sp.aset.push_back(kempe_component(g, pair.tau, u, s));
    sp.b = branch_entries(sp.bset, false, v);
    sp.a = branch_entries(sp.aset, true, v);
    for (int j = 0; j < static_cast<int>(sp.bset.size()); ++j) {
        if (sp.bset[j].contains(v)) {
            sp.j_star = j;
            break;
        }
    }
    if (!sp.b.empty()) {
        std::vector<int> adjusted = sp.b;
        if (sp.j_star >= 0) adjusted[sp.j_star] -= 1;
        sp.j_max = argmax_smallest(adjusted);
    }
    sp.i_max = argmax_smallest(sp.a);
    return sp;
}

LocalStructure local_structure(const NeighboringPair& pair) {
    const Graph& g = *pair.g;
    const int v = pair.v;
    const int s = pair.sigma[v];
    const int t = pair.tau[v];

    LocalStructure ls;
    ls.v = v;
    ls.s = s;
    ls.t = t;

    std::map<int, std::vector<int>> by_color;
    for (int u : g.adj[v]) by_color[pair.sigma[u]].push_back(u);

    for (const auto& [c, U] : by_color) {
        if (c == s || c == t) continue;
        ls.generic.push_back(build_generic_sector(pair, c, U));
    }
    ls.special = build_special_sector(pair);
    return ls;
}

}  // namespace detail

namespace {

// Applies the list rule on top of a structural entry: components of size > 1 that
// cannot flip under the lists drop to 0, size-1 components always keep their entry.
int list_adjusted(int entry, const KempeComponent& comp, const ListAssignment* lists) {
    if (entry == 0 || lists == nullptr || comp.size() <= 1) return entry;
    return is_flippable(comp, *lists) ? entry : 0;
}

Configuration config_from_generic(const detail::GenericSector& sec, const ListAssignment* lists) {
    Configuration cfg;
    cfg.c = sec.c;
    cfg.m = static_cast<int>(sec.U.size());
    cfg.special = SpecialCase::none;
    cfg.A = list_adjusted(sec.F_sig.size(), sec.F_sig, lists);
    cfg.B = list_adjusted(sec.F_tau.size(), sec.F_tau, lists);
    cfg.a.resize(cfg.m);
    cfg.b.resize(cfg.m);
    for (int i = 0; i < cfg.m; ++i) {
        cfg.a[i] = list_adjusted(sec.a[i], sec.aset[i], lists);
        cfg.b[i] = list_adjusted(sec.b[i], sec.bset[i], lists);
    }
    cfg.i_max = detail::argmax_smallest(cfg.a);
    cfg.j_max = detail::argmax_smallest(cfg.b);
    cfg.a_max = cfg.i_max >= 0 ? cfg.a[cfg.i_max] : 0;
    cfg.b_max = cfg.j_max >= 0 ? cfg.b[cfg.j_max] : 0;
    return cfg;
}

std::map<int, Configuration> extract_impl(const NeighboringPair& pair, const ListAssignment* lists) {
    detail::LocalStructure ls = detail::local_structure(pair);
    std::map<int, Configuration> out;

    for (const auto& sec : ls.generic) out.emplace(sec.c, config_from_generic(sec, lists));

    const detail::SpecialSector& sp = ls.special;
    if (!sp.U_t.empty()) {
        Configuration cfg;
        cfg.c = ls.t;
        cfg.m = static_cast<int>(sp.U_t.size());
        cfg.special = SpecialCase::c_is_tau_v;
        cfg.A = 0;
        cfg.B = 0;
        cfg.a.resize(cfg.m);
        for (int i = 0; i < cfg.m; ++i) cfg.a[i] = list_adjusted(sp.a[i], sp.aset[i], lists);
        cfg.b.assign(cfg.m, 0);
        cfg.i_max = detail::argmax_smallest(cfg.a);
        cfg.a_max = cfg.i_max >= 0 ? cfg.a[cfg.i_max] : 0;
        cfg.j_max = 0;
        cfg.b_max = 0;
        out.emplace(cfg.c, std::move(cfg));
    }
    if (!sp.U_s.empty()) {
        Configuration cfg;
        cfg.c = ls.s;
        cfg.m = static_cast<int>(sp.U_s.size());
        cfg.special = SpecialCase::c_is_sigma_v;
        cfg.A = 0;
        cfg.B = list_adjusted(sp.F_tau.size(), sp.F_tau, lists);
        cfg.a.assign(cfg.m, 0);
        cfg.b.resize(cfg.m);
        for (int j = 0; j < cfg.m; ++j) cfg.b[j] = list_adjusted(sp.b[j], sp.bset[j], lists);
        std::vector<int> adjusted = cfg.b;
        if (sp.j_star >= 0 && adjusted[sp.j_star] > 0) adjusted[sp.j_star] -= 1;
        cfg.j_max = detail::argmax_smallest(adjusted);
        cfg.b_max = cfg.j_max >= 0 ? adjusted[cfg.j_max] : 0;
        cfg.i_max = 0;
        cfg.a_max = 0;
        out.emplace(cfg.c, std::move(cfg));
    }
    return out;
}

}  // namespace

std::map<int, Configuration> extract_configurations(const NeighboringPair& pair) {
    return extract_impl(pair, nullptr);
}

std::map<int, Configuration> list_extract_configurations(const NeighboringPair& pair,
                                                         const ListAssignment& lists) {
    return extract_impl(pair, &lists);
}

std::string Configuration::serialize() const {
    std::ostringstream os;
    os << A << ',' << B << ";[";
    for (int i = 0; i < m; ++i) os << (i ? " " : "") << a[i];
    os << "];[";
    for (int i = 0; i < m; ++i) os << (i ? " " : "") << b[i];
    os << ']';
    return os.str();
}

bool Configuration::operator==(const Configuration& o) const {
    return c == o.c && m == o.m && A == o.A && B == o.B && a == o.a && b == o.b &&
           i_max == o.i_max && j_max == o.j_max && a_max == o.a_max && b_max == o.b_max &&
           special == o.special;
}

namespace {

bool multiset_is(const std::vector<int>& x, std::vector<int> want) {
    std::vector<int> got = x;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    return got == want;
}

}  // namespace

bool is_extremal(const Configuration& cfg) {
    if (cfg.special != SpecialCase::none) return false;
    if (cfg.m == 1) {
        if (cfg.A == 3 && cfg.B == 2 && multiset_is(cfg.a, {2}) && multiset_is(cfg.b, {1}))
            return true;
        return cfg.A == 2 && cfg.B == 3 && multiset_is(cfg.a, {1}) && multiset_is(cfg.b, {2});
    }
    if (cfg.m == 2) {
        if (cfg.A == 7 && cfg.B == 3 && multiset_is(cfg.a, {3, 3}) && multiset_is(cfg.b, {1, 1}))
            return true;
        return cfg.A == 3 && cfg.B == 7 && multiset_is(cfg.a, {1, 1}) && multiset_is(cfg.b, {3, 3});
    }
    return false;
}

StateLabel classify_state(const Configuration& cfg) {
    if (cfg.m == 0) return cfg.special == SpecialCase::none ? StateLabel::NotPresent : StateLabel::Good;
    if (cfg.special != SpecialCase::none) return StateLabel::Good;
    if (cfg.m == 1) return StateLabel::Sing;
    if (cfg.m == 2 && is_extremal(cfg)) return StateLabel::Bad;
    return StateLabel::Good;
}

StateLabel state_of_color(const NeighboringPair& pair, int c) {
    const Graph& g = *pair.g;
    int delta = 0;
    for (int u : g.adj[pair.v])
        if (pair.sigma[u] == c) ++delta;
    const int s = pair.sigma[pair.v];
    const int t = pair.tau[pair.v];
    if (c == s || c == t) return delta > 0 ? StateLabel::Good : StateLabel::NotPresent;
    if (delta == 0) return StateLabel::NotPresent;
    if (delta == 1) return StateLabel::Sing;
    if (delta > 2) return StateLabel::Good;
    std::vector<int> U;
    for (int u : g.adj[pair.v])
        if (pair.sigma[u] == c) U.push_back(u);
    return classify_state(config_from_generic(detail::build_generic_sector(pair, c, std::move(U)), nullptr));
}

StateCounts count_states(const NeighboringPair& pair) {
    StateCounts counts;
    for (const auto& [c, cfg] : extract_configurations(pair)) {
        switch (classify_state(cfg)) {
            case StateLabel::Sing: ++counts.n_sing; break;
            case StateLabel::Bad: ++counts.n_bad; break;
            case StateLabel::Good: ++counts.n_good; break;
            case StateLabel::NotPresent: break;
        }
    }
    return counts;
}

double gamma_fraction(const NeighboringPair& pair) {
    int c1 = 0;
    int c2 = 0;
    for (const auto& [c, cfg] : extract_configurations(pair)) {
        if (!is_extremal(cfg)) continue;
        if (cfg.m == 1) ++c1;
        if (cfg.m == 2) ++c2;
    }
    int delta = pair.g->max_degree();
    if (delta == 0) return 0.0;
    return (c1 + 2.0 * c2) / delta;
}

}  // namespace flip
