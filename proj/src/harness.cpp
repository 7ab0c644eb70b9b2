#include "flip/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "flip/chains.hpp"
#include "flip/coupling.hpp"
#include "flip/lp.hpp"
#include "flip/metrics.hpp"
#include "flip/rng.hpp"

namespace flip {

namespace {

using nlohmann::json;

const char* state_name(StateLabel s) {
    switch (s) {
        case StateLabel::Sing: return "sing";
        case StateLabel::Bad: return "bad";
        case StateLabel::Good: return "good";
        case StateLabel::NotPresent: return "not_present";
    }
    return "?";
}

PairInstance random_pair_on(Graph g, int k, uint64_t seed) {
    if (k < 2) throw std::invalid_argument("random pair: k must be at least 2");
    Rng rng(seed);
    PairInstance inst;
    inst.sigma.resize(g.n);
    for (int i = 0; i < g.n; ++i) inst.sigma[i] = static_cast<int>(rng.next_int(k));
    inst.v = static_cast<int>(rng.next_int(g.n));
    inst.tau = inst.sigma;
    int c = static_cast<int>(rng.next_int(k - 1));
    if (c >= inst.sigma[inst.v]) ++c;
    inst.tau[inst.v] = c;
    inst.g = std::move(g);
    return inst;
}

}  // namespace

PairInstance construct_G1(int delta) {
    if (delta < 1) throw std::invalid_argument("construct_G1: delta must be at least 1");
    const int n = 1 + 2 * delta;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < delta; ++i) {
        edges.push_back({0, 1 + i});
        edges.push_back({1 + i, 1 + delta + i});
    }
    PairInstance inst;
    inst.g = Graph::from_edges(n, edges);
    inst.sigma.assign(n, 0);
    for (int i = 0; i < delta; ++i) inst.sigma[1 + i] = 2 + i;
    inst.tau = inst.sigma;
    inst.tau[0] = 1;
    inst.v = 0;
    return inst;
}

PairInstance construct_G2(int delta) {
    if (delta < 2 || delta % 2 != 0)
        throw std::invalid_argument("construct_G2: delta must be even and at least 2");
    const int n = 1 + 3 * delta;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < delta; ++i) {
        edges.push_back({0, 1 + i});
        edges.push_back({1 + i, 1 + delta + 2 * i});
        edges.push_back({1 + i, 2 + delta + 2 * i});
    }
    PairInstance inst;
    inst.g = Graph::from_edges(n, edges);
    inst.sigma.assign(n, 0);
    for (int i = 0; i < delta; ++i) inst.sigma[1 + i] = 2 + i / 2;
    inst.tau = inst.sigma;
    inst.tau[0] = 1;
    inst.v = 0;
    return inst;
}

PairInstance random_neighboring_pair(int n, int delta, int k, uint64_t seed) {
    if (n < 1 || delta < 0 || k < 2)
        throw std::invalid_argument("random_neighboring_pair: need n >= 1, delta >= 0, k >= 2");
    Rng rng(seed);
    std::vector<std::pair<int, int>> all_edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all_edges.push_back({i, j});

    std::vector<std::pair<int, int>> edges;
    std::vector<int> deg(n);
    bool ok = false;
    for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
        edges.clear();
        std::fill(deg.begin(), deg.end(), 0);
        for (const auto& e : all_edges)
            if (rng.next_int(2) == 1) {
                edges.push_back(e);
                ++deg[e.first];
                ++deg[e.second];
            }
        ok = *std::max_element(deg.begin(), deg.end()) <= delta;
    }
    if (!ok)
        throw std::invalid_argument("random_neighboring_pair: degree cap rejection kept failing");
    Graph g = Graph::from_edges(n, edges);

    PairInstance inst;
    inst.sigma.resize(n);
    for (int i = 0; i < n; ++i) inst.sigma[i] = static_cast<int>(rng.next_int(k));
    inst.v = static_cast<int>(rng.next_int(n));
    inst.tau = inst.sigma;
    int c = static_cast<int>(rng.next_int(k - 1));
    if (c >= inst.sigma[inst.v]) ++c;
    inst.tau[inst.v] = c;
    inst.g = std::move(g);
    return inst;
}

int default_k(int delta) {
    if (delta < 1) throw std::invalid_argument("default_k: delta must be positive");
    const Rational r = (Rational(11, 6) - Rational(1, 84000)) * delta;
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    const boost::multiprecision::cpp_int q = (num + den - 1) / den;
    return q.convert_to<int>();
}

FlipParams preset_by_name(const std::string& name, const std::string& file) {
    if (name == "vigoda_eq11") return FlipParams::vigoda_eq11();
    if (name == "cm_eq12") return FlipParams::cm_eq12();
    if (name == "dpp_obs51") return FlipParams::dpp_obs51();
    if (name == "file" || name == "custom") {
        if (file.empty())
            throw std::invalid_argument("preset '" + name + "' needs a parameter file");
        return FlipParams::from_file(file);
    }
    throw std::invalid_argument("unknown preset: " + name);
}

void parallel_for(long long count, const std::function<void(long long)>& fn) {
    if (count <= 0) return;
    long long workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FLIP_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) workers = v;
    }
    workers = std::min(workers, count);
    if (workers == 1) {
        for (long long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (long long w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const long long i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

namespace {

bool mask_connected(int n, const std::vector<std::pair<int, int>>& edge_of, unsigned mask) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int comps = n;
    for (size_t e = 0; e < edge_of.size(); ++e)
        if (mask >> e & 1) {
            int a = find(edge_of[e].first), b = find(edge_of[e].second);
            if (a != b) {
                parent[a] = b;
                --comps;
            }
        }
    return comps == 1;
}

}  // namespace

std::vector<Graph> connected_graphs_up_to(int max_n) {
    if (max_n > 6)
        throw std::invalid_argument("connected_graphs_up_to: canonicalization supports n <= 6");
    std::vector<Graph> out;
    for (int n = 2; n <= max_n; ++n) {
        std::vector<std::pair<int, int>> edge_of;
        std::vector<std::vector<int>> pos(n, std::vector<int>(n, -1));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                pos[i][j] = pos[j][i] = static_cast<int>(edge_of.size());
                edge_of.push_back({i, j});
            }
        const int E = static_cast<int>(edge_of.size());
        std::vector<int> perm(n);
        for (unsigned mask = 1; mask < (1u << E); ++mask) {
            if (!mask_connected(n, edge_of, mask)) continue;
            std::iota(perm.begin(), perm.end(), 0);
            bool canonical = true;
            do {
                unsigned relabeled = 0;
                for (int e = 0; e < E; ++e)
                    if (mask >> e & 1)
                        relabeled |= 1u << pos[perm[edge_of[e].first]][perm[edge_of[e].second]];
                if (relabeled < mask) {
                    canonical = false;
                    break;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (!canonical) continue;
            std::vector<std::pair<int, int>> edges;
            for (int e = 0; e < E; ++e)
                if (mask >> e & 1) edges.push_back(edge_of[e]);
            out.push_back(Graph::from_edges(n, edges));
        }
    }
    return out;
}

std::vector<PairInstance> pair_representatives(const Graph& g, int k) {
    if (k < 2) throw std::invalid_argument("pair_representatives: k must be at least 2");
    long long states = 1;
    for (int i = 0; i < g.n; ++i) {
        states *= k;
        if (states > (1LL << 22))
            throw std::invalid_argument("pair_representatives: coloring space too large");
    }
    std::vector<PairInstance> out;
    std::set<std::string> seen;
    Coloring sigma(g.n);
    std::vector<int> relabel(k);
    for (long long idx = 0; idx < states; ++idx) {
        long long rem = idx;
        for (int i = 0; i < g.n; ++i) {
            sigma[i] = static_cast<int>(rem % k);
            rem /= k;
        }
        for (int v = 0; v < g.n; ++v)
            for (int tv = 0; tv < k; ++tv) {
                if (tv == sigma[v]) continue;
                std::fill(relabel.begin(), relabel.end(), -1);
                int next = 0;
                std::string key;
                key.reserve(g.n + 2);
                key.push_back(static_cast<char>(v));
                auto canon = [&](int c) {
                    if (relabel[c] < 0) relabel[c] = next++;
                    key.push_back(static_cast<char>(relabel[c]));
                };
                for (int i = 0; i < g.n; ++i) canon(sigma[i]);
                canon(tv);
                if (!seen.insert(key).second) continue;
                PairInstance inst;
                inst.g = g;
                inst.sigma = sigma;
                inst.tau = sigma;
                inst.tau[v] = tv;
                inst.v = v;
                out.push_back(std::move(inst));
            }
    }
    return out;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);
    ExperimentConfig cfg;
    cfg.kind = j.value("kind", cfg.kind);
    cfg.graph_source = j.value("graph_source", cfg.graph_source);
    cfg.graph_file = j.value("graph_file", cfg.graph_file);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.n = j.value("n", cfg.n);
    cfg.k = j.value("k", cfg.k);
    cfg.preset = j.value("preset", cfg.preset);
    cfg.preset_file = j.value("preset_file", cfg.preset_file);
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.step_cap = j.value("step_cap", cfg.step_cap);
    cfg.out_path = j.value("out_path", cfg.out_path);
    return cfg;
}

std::string ExperimentConfig::to_json() const {
    json j{{"kind", kind},
           {"graph_source", graph_source},
           {"graph_file", graph_file},
           {"delta", delta},
           {"n", n},
           {"k", k},
           {"preset", preset},
           {"preset_file", preset_file},
           {"trials", trials},
           {"seed", seed},
           {"step_cap", step_cap},
           {"out_path", out_path}};
    return j.dump(2);
}

namespace {

PairInstance build_instance(const ExperimentConfig& cfg, int k) {
    if (cfg.graph_source == "g1") return construct_G1(cfg.delta);
    if (cfg.graph_source == "g2") return construct_G2(cfg.delta);
    if (cfg.graph_source == "random")
        return random_neighboring_pair(cfg.n > 0 ? cfg.n : 6, cfg.delta, k, cfg.seed);
    if (cfg.graph_source == "file") {
        if (cfg.graph_file.empty())
            throw std::invalid_argument("graph_source 'file' needs graph_file");
        return random_pair_on(load_graph_file(cfg.graph_file), k, cfg.seed);
    }
    throw std::invalid_argument("unknown graph_source: " + cfg.graph_source);
}

int resolve_k(const ExperimentConfig& cfg) {
    if (cfg.k > 0) return cfg.k;
    return default_k(cfg.delta);
}

json base_summary(const ExperimentConfig& cfg, int k) {
    return json{{"kind", cfg.kind},
                {"graph_source", cfg.graph_source},
                {"preset", cfg.preset},
                {"k", k},
                {"delta", cfg.delta},
                {"seed", cfg.seed},
                {"trials", cfg.trials}};
}

ExperimentResult run_hamming_scan(const ExperimentConfig& cfg) {
    const int k = resolve_k(cfg);
    const FlipParams p = preset_by_name(cfg.preset, cfg.preset_file);
    const PairInstance inst = build_instance(cfg, k);
    const NeighboringPair pair = inst.pair();
    const Rational exact = expected_hamming_change_exact(pair, k, p);
    const double change = expected_hamming_change(pair, k, p);
    const auto cfgs = extract_configurations(pair);

    std::ostringstream csv;
    csv << "color,state,delta_c,h_value\n";
    csv.precision(12);
    double h_sum = 0.0;
    int zero_colors = 0;
    for (int c = 0; c < k; ++c) {
        auto it = cfgs.find(c);
        if (it == cfgs.end()) {
            ++zero_colors;
            csv << c << ",not_present,0,0\n";
            continue;
        }
        const Configuration& cc = it->second;
        int delta_c = 0;
        for (int u : inst.g.adj[pair.v])
            if (pair.sigma[u] == c) ++delta_c;
        const double h = to_double(H_value(cc, p));
        h_sum += h;
        csv << c << ',' << state_name(classify_state(cc)) << ',' << delta_c << ',' << h << '\n';
    }

    json summary = base_summary(cfg, k);
    summary["n"] = inst.g.n;
    summary["nk_expected_change_exact"] = exact.str();
    summary["expected_change"] = change;
    summary["h_sum"] = h_sum;
    summary["zero_colors"] = zero_colors;
    summary["gamma"] = gamma_fraction(pair);
    return {csv.str(), summary.dump(2)};
}

ExperimentResult run_stages(const ExperimentConfig& cfg) {
    const int k = resolve_k(cfg);
    const FlipParams p = preset_by_name(cfg.preset, cfg.preset_file);
    const PairInstance inst = build_instance(cfg, k);
    Rng rng(cfg.seed);
    const StageStats st = stage_statistics(inst.pair(), k, p, cfg.trials, rng);

    json summary = base_summary(cfg, k);
    summary["mean_t_stop"] = st.mean_t_stop;
    summary["stderr_t_stop"] = st.stderr_t_stop;
    json rows = json::array();
    for (const StageRow& r : st.rows)
        rows.push_back(json{{"transition", r.transition},
                            {"count", r.count},
                            {"freq", r.freq},
                            {"stderr", r.stderr_},
                            {"bound", r.bound}});
    summary["transitions"] = rows;
    return {st.to_csv(), summary.dump(2)};
}

ExperimentResult run_mixing(const ExperimentConfig& cfg) {
    const int k = resolve_k(cfg);
    const FlipParams p = preset_by_name(cfg.preset, cfg.preset_file);
    const PairInstance inst = build_instance(cfg, k);
    const TransitionMatrix tm = transition_matrix(inst.g, k, ChainKind::flip, &p);
    const long long start = tm.index_of(inst.sigma);
    const int t_max = static_cast<int>(std::min<long long>(cfg.trials, 10000));
    const std::vector<double> tv = tv_decay(tm, start, t_max);

    std::ostringstream csv;
    csv << "t,tv\n";
    csv.precision(12);
    long long t_quarter = -1;
    for (size_t t = 0; t < tv.size(); ++t) {
        csv << t << ',' << tv[t] << '\n';
        if (t_quarter < 0 && tv[t] <= 0.25) t_quarter = static_cast<long long>(t);
    }
    json summary = base_summary(cfg, k);
    summary["n"] = inst.g.n;
    summary["states"] = tm.num_states;
    summary["steps"] = t_max;
    summary["final_tv"] = tv.back();
    summary["t_quarter"] = t_quarter;
    return {csv.str(), summary.dump(2)};
}

ExperimentResult run_barrier(const ExperimentConfig& cfg) {
    const int delta = cfg.delta;
    int k = cfg.k;
    if (k <= 0) {
        const Rational r = Rational(11, 6) * delta;
        const auto num = boost::multiprecision::numerator(r);
        const auto den = boost::multiprecision::denominator(r);
        const boost::multiprecision::cpp_int q = (num + den - 1) / den;
        k = q.convert_to<int>() - 1;
    }
    const PairInstance g1 = construct_G1(delta);
    const PairInstance g2 = construct_G2(delta);

    const std::vector<Rational> values{Rational(0),      Rational(1, 84), Rational(1, 42),
                                       Rational(1, 21),  Rational(2, 21), Rational(1, 6),
                                       Rational(13, 42)};
    std::vector<std::array<int, 5>> tuples;
    std::array<int, 5> pick{};
    std::function<void(int, int)> gen = [&](int pos, int lo) {
        if (pos == 5) {
            tuples.push_back(pick);
            return;
        }
        for (int i = lo; i < static_cast<int>(values.size()); ++i) {
            pick[pos] = i;
            gen(pos + 1, i);
        }
    };
    gen(0, 0);
    // indices descend in value when read p2..p6, so reverse each tuple
    for (auto& t : tuples) std::reverse(t.begin(), t.end());
    if (cfg.trials > 0 && cfg.trials < static_cast<long long>(tuples.size()))
        tuples.resize(cfg.trials);

    std::vector<double> e1(tuples.size()), e2(tuples.size());
    parallel_for(static_cast<long long>(tuples.size()), [&](long long i) {
        std::vector<Rational> ps{Rational(1)};
        for (int idx : tuples[i]) ps.push_back(values[idx]);
        const FlipParams p(ps);
        e1[i] = expected_hamming_change(g1.pair(), k, p);
        e2[i] = expected_hamming_change(g2.pair(), k, p);
    });

    std::ostringstream csv;
    csv << "p2,p3,p4,p5,p6,e_g1,e_g2\n";
    csv.precision(12);
    double min_max = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < tuples.size(); ++i) {
        for (int idx : tuples[i]) csv << values[idx].str() << ',';
        csv << e1[i] << ',' << e2[i] << '\n';
        min_max = std::min(min_max, std::max(e1[i], e2[i]));
    }
    json summary = base_summary(cfg, k);
    summary["vector_count"] = tuples.size();
    summary["min_max_change"] = min_max;
    summary["barrier_holds"] = min_max >= -1e-12;
    return {csv.str(), summary.dump(2)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    if (cfg.kind == "hamming_scan")
        res = run_hamming_scan(cfg);
    else if (cfg.kind == "stages")
        res = run_stages(cfg);
    else if (cfg.kind == "mixing")
        res = run_mixing(cfg);
    else if (cfg.kind == "barrier")
        res = run_barrier(cfg);
    else
        throw std::invalid_argument("unknown experiment kind: " + cfg.kind);

    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    json summary = json::parse(res.summary_json);
    summary["elapsed_ms"] = ms;
    res.summary_json = summary.dump(2);

    if (!cfg.out_path.empty()) {
        std::ofstream csv_out(cfg.out_path + ".csv");
        if (!csv_out) throw std::runtime_error("cannot write " + cfg.out_path + ".csv");
        csv_out << res.csv;
        std::ofstream json_out(cfg.out_path + ".json");
        if (!json_out) throw std::runtime_error("cannot write " + cfg.out_path + ".json");
        json_out << res.summary_json << '\n';
    }
    return res;
}

}  // namespace flip
