#include "flip/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace flip {

namespace {

// ---------------------------------------------------------------------------
// Dense two-phase simplex for max c.x subject to Ax <= b, x >= 0, with a single
// artificial column. Instantiated over double (tolerance pivoting, steepest
// reduced cost) and Rational (exact pivoting, Bland's entering rule).
// ---------------------------------------------------------------------------

template <class T>
struct ScalarOps;

template <>
struct ScalarOps<double> {
    static constexpr bool exact = false;
    static bool neg(double v) { return v < -1e-9; }
    static bool pos(double v) { return v > 1e-9; }
    static bool nonzero(double v) { return std::abs(v) > 1e-9; }
};

template <>
struct ScalarOps<Rational> {
    static constexpr bool exact = true;
    static bool neg(const Rational& v) { return v < 0; }
    static bool pos(const Rational& v) { return v > 0; }
    static bool nonzero(const Rational& v) { return v != 0; }
};

template <class T>
struct DenseSimplex {
    int m, n;
    std::vector<int> N, B;
    std::vector<std::vector<T>> D;

    DenseSimplex(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                 const std::vector<T>& c)
        : m(static_cast<int>(b.size())),
          n(static_cast<int>(c.size())),
          N(n + 1),
          B(m),
          D(m + 2, std::vector<T>(n + 2, T(0))) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) D[i][j] = A[i][j];
        for (int i = 0; i < m; ++i) {
            B[i] = n + i;
            D[i][n] = T(-1);
            D[i][n + 1] = b[i];
        }
        for (int j = 0; j < n; ++j) {
            N[j] = j;
            D[m][j] = -c[j];
        }
        N[n] = -1;
        D[m + 1][n] = T(1);
    }

    void pivot(int r, int s) {
        T* a = D[r].data();
        T inv = T(1) / a[s];
        for (int i = 0; i < m + 2; ++i)
            if (i != r && ScalarOps<T>::nonzero(D[i][s])) {
                T* bi = D[i].data();
                T inv2 = bi[s] * inv;
                for (int j = 0; j < n + 2; ++j) bi[j] -= a[j] * inv2;
                bi[s] = a[s] * inv2;
            }
        for (int j = 0; j < n + 2; ++j)
            if (j != s) D[r][j] *= inv;
        for (int i = 0; i < m + 2; ++i)
            if (i != r) D[i][s] *= -inv;
        D[r][s] = inv;
        std::swap(B[r], N[s]);
    }

    int entering(int phase) const {
        const std::vector<T>& row = D[m + phase - 1];
        int s = -1;
        for (int j = 0; j <= n; ++j) {
            if (N[j] == -phase) continue;
            if (!ScalarOps<T>::neg(row[j])) continue;
            if (s == -1) {
                s = j;
            } else if (ScalarOps<T>::exact) {
                if (N[j] < N[s]) s = j;
            } else if (std::make_pair(row[j], N[j]) < std::make_pair(row[s], N[s])) {
                s = j;
            }
        }
        return s;
    }

    bool run(int phase) {
        for (long long iter = 0;; ++iter) {
            if (iter > 500000) throw std::logic_error("simplex did not converge");
            int s = entering(phase);
            if (s == -1) return true;
            int r = -1;
            T best{};
            for (int i = 0; i < m; ++i) {
                if (!ScalarOps<T>::pos(D[i][s])) continue;
                T ratio = D[i][n + 1] / D[i][s];
                if (r == -1 || std::make_pair(ratio, B[i]) < std::make_pair(best, B[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    // 0 = optimal, 1 = infeasible, 2 = unbounded
    int solve(std::vector<T>& xout) {
        int r = 0;
        for (int i = 1; i < m; ++i)
            if (D[i][n + 1] < D[r][n + 1]) r = i;
        if (ScalarOps<T>::neg(D[r][n + 1])) {
            pivot(r, n);
            if (!run(2) || ScalarOps<T>::neg(D[m + 1][n + 1])) return 1;
            for (int i = 0; i < m; ++i)
                if (B[i] == -1) {
                    int s = -1;
                    for (int j = 0; j <= n; ++j) {
                        if (!ScalarOps<T>::nonzero(D[i][j])) continue;
                        if (s == -1 || N[j] < N[s]) s = j;
                    }
                    if (s >= 0) pivot(i, s);
                }
        }
        bool ok = run(1);
        xout.assign(n, T(0));
        for (int i = 0; i < m; ++i)
            if (B[i] >= 0 && B[i] < n) xout[B[i]] = D[i][n + 1];
        return ok ? 0 : 2;
    }
};

// ---------------------------------------------------------------------------
// Constraint assembly
// ---------------------------------------------------------------------------

using Coeffs = std::map<int, Rational>;

void add_coeff(Coeffs& row, int var, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = row.try_emplace(var, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) row.erase(it);
    }
}

int argmax_first(const std::vector<int>& x) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(x.size()); ++i)
        if (x[i] > x[best]) best = i;
    return best;
}

int sum_of(const std::vector<int>& x) {
    int s = 0;
    for (int v : x) s += v;
    return s;
}

Configuration main_template(std::vector<int> a, std::vector<int> b) {
    Configuration cfg;
    cfg.c = -1;
    cfg.m = static_cast<int>(a.size());
    cfg.A = 1 + sum_of(a);
    cfg.B = 1 + sum_of(b);
    cfg.a = std::move(a);
    cfg.b = std::move(b);
    cfg.i_max = argmax_first(cfg.a);
    cfg.j_max = argmax_first(cfg.b);
    cfg.a_max = cfg.a[cfg.i_max];
    cfg.b_max = cfg.b[cfg.j_max];
    return cfg;
}

Configuration oneside_template(std::vector<int> b) {
    Configuration cfg;
    cfg.c = -1;
    cfg.special = SpecialCase::c_is_sigma_v;
    cfg.m = static_cast<int>(b.size());
    cfg.A = 0;
    cfg.a.assign(cfg.m, 0);
    cfg.B = sum_of(b);
    cfg.b = std::move(b);
    cfg.i_max = 0;
    cfg.a_max = 0;
    cfg.j_max = argmax_first(cfg.b);
    cfg.b_max = cfg.b[cfg.j_max];
    return cfg;
}

bool is_bad_template(const Configuration& cfg) {
    if (cfg.special != SpecialCase::none || cfg.m != 2) return false;
    const std::vector<int> three{3, 3}, one{1, 1};
    return (cfg.a == three && cfg.b == one) || (cfg.a == one && cfg.b == three);
}

void all_vectors(int m, int hi, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> cur(m, 0);
    for (;;) {
        f(cur);
        int i = m - 1;
        while (i >= 0 && cur[i] == hi) cur[i--] = 0;
        if (i < 0) return;
        ++cur[i];
    }
}

void sorted_vectors(int m, int hi, int lo, std::vector<int>& cur,
                    const std::function<void(const std::vector<int>&)>& f) {
    if (static_cast<int>(cur.size()) == m) {
        f(cur);
        return;
    }
    for (int v = lo; v <= hi; ++v) {
        cur.push_back(v);
        sorted_vectors(m, hi, v, cur, f);
        cur.pop_back();
    }
}

struct Builder {
    LPInstance lp;
    int n_max = kDefaultNmax;

    // p_0 and entries beyond n_max are identically zero and drop out
    void add_p(Coeffs& row, int alpha, const Rational& c) const {
        if (alpha < 1 || alpha > n_max) return;
        add_coeff(row, alpha - 1, c);
    }

    void row(Coeffs coeffs, Rational rhs, std::string tag) {
        LinearConstraint lc;
        lc.terms.assign(coeffs.begin(), coeffs.end());
        lc.rhs = std::move(rhs);
        lc.tag = std::move(tag);
        lp.constraints.push_back(std::move(lc));
    }
};

// One pairing choice per subset of indexes where both branch entries are live;
// the chosen side's discounted mass is subtracted from the undiscounted sum.
void emit_main_rows(Builder& bld, const Configuration& cfg, int lambda_var) {
    Coeffs base;
    bld.add_p(base, cfg.A, Rational(cfg.A - cfg.a_max - 1));
    bld.add_p(base, cfg.B, Rational(cfg.B - cfg.b_max - 1));
    std::vector<int> paired;
    for (int i = 0; i < cfg.m; ++i) {
        const int ai = cfg.a[i], bi = cfg.b[i];
        bld.add_p(base, ai, Rational(ai));
        if (i == cfg.i_max && cfg.a_max > 0) bld.add_p(base, cfg.A, Rational(-ai));
        bld.add_p(base, bi, Rational(bi));
        if (i == cfg.j_max && cfg.b_max > 0) bld.add_p(base, cfg.B, Rational(-bi));
        if (ai > 0 && bi > 0) paired.push_back(i);
    }
    const int nc = static_cast<int>(paired.size());
    for (int mask = 0; mask < (1 << nc); ++mask) {
        Coeffs row = base;
        for (int r = 0; r < nc; ++r) {
            const int i = paired[r];
            if (mask >> r & 1) {
                bld.add_p(row, cfg.b[i], Rational(-1));
                if (i == cfg.j_max && cfg.b_max > 0) bld.add_p(row, cfg.B, Rational(1));
            } else {
                bld.add_p(row, cfg.a[i], Rational(-1));
                if (i == cfg.i_max && cfg.a_max > 0) bld.add_p(row, cfg.A, Rational(1));
            }
        }
        add_coeff(row, lambda_var, Rational(-cfg.m));
        std::string tag = "main:" + cfg.serialize();
        if (nc > 0) {
            tag += ":c";
            for (int r = 0; r < nc; ++r) tag += static_cast<char>('0' + (mask >> r & 1));
        }
        bld.row(std::move(row), Rational(-1), std::move(tag));
    }
}

// (B - b_m) p_B + sum over the other entries of b_i p_{b_i}, entries sorted
void emit_oneside_row(Builder& bld, const Configuration& cfg, int lambda_var) {
    Coeffs row;
    bld.add_p(row, cfg.B, Rational(cfg.B - cfg.b[cfg.m - 1]));
    for (int i = 0; i + 1 < cfg.m; ++i) bld.add_p(row, cfg.b[i], Rational(cfg.b[i]));
    add_coeff(row, lambda_var, Rational(-cfg.m));
    bld.row(std::move(row), Rational(-1), "oneside:" + cfg.serialize());
}

Rational oneside_lhs(const Configuration& cfg, const FlipParams& p) {
    Rational lhs = Rational(cfg.B - cfg.b[cfg.m - 1]) * p.at(cfg.B);
    for (int i = 0; i + 1 < cfg.m; ++i) lhs += Rational(cfg.b[i]) * p.at(cfg.b[i]);
    return lhs;
}

void emit_box(Builder& bld, int var, const std::string& name) {
    Coeffs row;
    add_coeff(row, var, Rational(1));
    bld.row(std::move(row), Rational(10), "box:" + name);
}

Rational x_completion(const FlipParams& p, int n_max) {
    Rational x(0);
    for (int A = 1; A <= n_max; ++A) x = std::max(x, Rational(Rational(A - 2) * p.at(A)));
    return x;
}

Rational y_completion(const FlipParams& p, int n_max) {
    Rational y(0);
    for (int a = 0; a <= n_max; ++a)
        for (int b = a + 1; b <= n_max; ++b) {
            Rational t = Rational(a) * p.at(a) + Rational(b) * p.at(b) -
                         std::min(p.at(a), p.at(b));
            y = std::max(y, t);
        }
    return y;
}

std::map<std::string, Rational> named_params(const FlipParams& p) {
    std::map<std::string, Rational> out;
    for (int a = 1; a <= p.n_max(); ++a) out["p" + std::to_string(a)] = p.at(a);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// H and the template families
// ---------------------------------------------------------------------------

Rational H_value(const Configuration& cfg, const FlipParams& p) {
    if (cfg.special == SpecialCase::c_is_tau_v) {
        Rational h(0);
        for (int ai : cfg.a) h += Rational(ai) * p.at(ai);
        return h;
    }
    if (cfg.special == SpecialCase::c_is_sigma_v) {
        if (cfg.m <= 1) return Rational(0);
        const Rational pB = p.at(cfg.B);
        Rational h = Rational(cfg.B - cfg.b_max - 1) * pB;
        for (int i = 0; i < cfg.m; ++i) {
            if (i == cfg.j_max)
                h += Rational(cfg.b[i]) * (p.at(cfg.b[i]) - pB);
            else
                h += Rational(cfg.b[i]) * p.at(cfg.b[i]);
        }
        return h;
    }
    const Rational pA = p.at(cfg.A);
    const Rational pB = p.at(cfg.B);
    Rational h = Rational(cfg.A - cfg.a_max - 1) * pA + Rational(cfg.B - cfg.b_max - 1) * pB;
    const Rational m1 = cfg.m > 0 ? std::min(pA, p.at(cfg.a[cfg.i_max])) : Rational(0);
    const Rational m2 = cfg.m > 0 ? std::min(pB, p.at(cfg.b[cfg.j_max])) : Rational(0);
    for (int i = 0; i < cfg.m; ++i) {
        Rational qi = p.at(cfg.a[i]);
        if (i == cfg.i_max) qi -= m1;
        Rational qpi = p.at(cfg.b[i]);
        if (i == cfg.j_max) qpi -= m2;
        h += Rational(cfg.a[i]) * qi + Rational(cfg.b[i]) * qpi - std::min(qi, qpi);
    }
    return h;
}

Rational H_crude_bound(const Configuration& cfg, const FlipParams& p) {
    Rational h = Rational(cfg.A - 2) * p.at(cfg.A) + Rational(cfg.B - 2) * p.at(cfg.B);
    for (int i = 0; i < cfg.m; ++i)
        h += Rational(cfg.a[i]) * p.at(cfg.a[i]) + Rational(cfg.b[i]) * p.at(cfg.b[i]) -
             std::min(p.at(cfg.a[i]), p.at(cfg.b[i]));
    return h;
}

std::vector<Configuration> enumerate_realizable(int m_star, int n_max) {
    if (m_star < 2) throw std::invalid_argument("enumerate_realizable: m_star must be at least 2");
    if (n_max < 1) throw std::invalid_argument("enumerate_realizable: n_max must be at least 1");
    std::vector<Configuration> out;
    for (int m = 1; m < m_star; ++m) {
        std::vector<std::vector<int>> vecs;
        all_vectors(m, n_max, [&](const std::vector<int>& v) { vecs.push_back(v); });
        for (const auto& a : vecs)
            for (const auto& b : vecs) {
                if (sum_of(a) == 0 && sum_of(b) == 0) continue;
                out.push_back(main_template(a, b));
            }
    }
    for (int m = 2; m < m_star; ++m) {
        std::vector<int> cur;
        sorted_vectors(m, n_max, 0, cur, [&](const std::vector<int>& b) {
            if (b.back() == 0) return;
            out.push_back(oneside_template(b));
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// Program construction
// ---------------------------------------------------------------------------

int LPInstance::var(const std::string& vname) const {
    for (int i = 0; i < static_cast<int>(var_names.size()); ++i)
        if (var_names[i] == vname) return i;
    throw std::invalid_argument("unknown LP variable: " + vname);
}

std::string LPInstance::export_text() const {
    std::ostringstream os;
    os << name << ": minimize " << var_names[objective_var] << " over " << var_names.size()
       << " variables, " << constraints.size() << " constraints\n";
    for (const auto& lc : constraints) {
        os << "  ";
        bool first = true;
        for (const auto& [v, cf] : lc.terms) {
            if (!first) os << " + ";
            first = false;
            os << cf << '*' << var_names[v];
        }
        if (lc.terms.empty()) os << '0';
        os << " <= " << lc.rhs << "  [" << lc.tag << "]\n";
    }
    return os.str();
}

LPInstance build_lp(LPKind kind, int m_star, int n_max, std::optional<double> gamma) {
    if (m_star < 2) throw std::invalid_argument("build_lp: m_star must be at least 2");
    if (n_max < 1) throw std::invalid_argument("build_lp: n_max must be at least 1");
    if (kind == LPKind::lp5_mixed && !gamma)
        throw std::invalid_argument("build_lp: the mixed program needs a mixing weight");

    Builder bld;
    bld.n_max = n_max;
    LPInstance& lp = bld.lp;
    for (int a = 1; a <= n_max; ++a) lp.var_names.push_back("p" + std::to_string(a));
    lp.var_names.push_back("lambda");
    const int lambda = n_max;
    lp.objective_var = lambda;

    int xv = -1, yv = -1, l_sing = -1, l_bad = -1, l_good = -1;
    const bool with_closure = kind == LPKind::lp2 || kind == LPKind::lp5_mixed;
    if (with_closure) {
        xv = static_cast<int>(lp.var_names.size());
        lp.var_names.push_back("x");
        yv = static_cast<int>(lp.var_names.size());
        lp.var_names.push_back("y");
    }
    if (kind == LPKind::lp5_mixed) {
        l_sing = static_cast<int>(lp.var_names.size());
        lp.var_names.push_back("lambda_sing");
        l_bad = static_cast<int>(lp.var_names.size());
        lp.var_names.push_back("lambda_bad");
        l_good = static_cast<int>(lp.var_names.size());
        lp.var_names.push_back("lambda_good");
    }
    switch (kind) {
        case LPKind::lp1_restricted: lp.name = "lp1_restricted"; break;
        case LPKind::lp2: lp.name = "lp2"; break;
        case LPKind::lp3: lp.name = "lp3"; break;
        case LPKind::lp4: lp.name = "lp4"; break;
        case LPKind::lp5_mixed: lp.name = "lp5_mixed"; break;
    }

    {
        Coeffs r;
        add_coeff(r, 0, Rational(1));
        bld.row(std::move(r), Rational(1), "pin:p1<=1");
    }
    {
        Coeffs r;
        add_coeff(r, 0, Rational(-1));
        bld.row(std::move(r), Rational(-1), "pin:p1>=1");
    }
    for (int a = 2; a <= n_max; ++a) {
        Coeffs r;
        add_coeff(r, a - 1, Rational(1));
        add_coeff(r, a - 2, Rational(-1));
        bld.row(std::move(r), Rational(0),
                "mono:p" + std::to_string(a) + "<=p" + std::to_string(a - 1));
    }

    if (kind == LPKind::lp3) {
        emit_main_rows(bld, main_template({2}, {1}), lambda);
        emit_main_rows(bld, main_template({3, 3}, {1, 1}), lambda);
        emit_box(bld, lambda, "lambda");
        return lp;
    }
    if (kind == LPKind::lp4) {
        {
            Coeffs r;
            add_coeff(r, 2, Rational(1));
            bld.row(std::move(r), Rational(1, 6), "pin:p3<=1/6");
        }
        {
            Coeffs r;
            add_coeff(r, 2, Rational(-1));
            bld.row(std::move(r), Rational(-1, 6), "pin:p3>=1/6");
        }
        for (int i = 1; i <= n_max; ++i)
            for (int j = 2; j <= n_max; ++j) {
                if (i == 1 && j == 2) continue;
                emit_main_rows(bld, main_template({i}, {j}), lambda);
            }
        emit_main_rows(bld, main_template({2, 2}, {1, 1}), lambda);
        emit_box(bld, lambda, "lambda");
        return lp;
    }

    for (int a = 1; a <= n_max; ++a) {
        Coeffs r;
        add_coeff(r, a - 1, Rational(a));
        bld.row(std::move(r), Rational(1), "cap:" + std::to_string(a));
    }

    for (const Configuration& cfg : enumerate_realizable(m_star, n_max)) {
        if (cfg.special == SpecialCase::none) {
            int lv = lambda;
            if (kind == LPKind::lp5_mixed) {
                if (cfg.m == 1)
                    lv = l_sing;
                else if (is_bad_template(cfg))
                    lv = l_bad;
                else
                    lv = l_good;
            }
            emit_main_rows(bld, cfg, lv);
        } else if (with_closure) {
            emit_oneside_row(bld, cfg, kind == LPKind::lp5_mixed ? l_good : lambda);
        }
    }

    if (with_closure) {
        for (int A = 0; A <= n_max + 1; ++A) {
            Coeffs r;
            bld.add_p(r, A, Rational(A - 2));
            add_coeff(r, xv, Rational(-1));
            bld.row(std::move(r), Rational(0), "xdef:A=" + std::to_string(A));
        }
        for (int a = 0; a <= n_max; ++a)
            for (int b = a + 1; b <= n_max; ++b) {
                Coeffs r;
                bld.add_p(r, a, Rational(a));
                bld.add_p(r, b, Rational(b - 1));
                add_coeff(r, yv, Rational(-1));
                bld.row(std::move(r), Rational(0),
                        "ydef:a=" + std::to_string(a) + ",b=" + std::to_string(b));
            }
        Coeffs r;
        add_coeff(r, xv, Rational(2));
        add_coeff(r, yv, Rational(m_star));
        add_coeff(r, kind == LPKind::lp5_mixed ? l_good : lambda, Rational(-m_star));
        bld.row(std::move(r), Rational(-1), "closure:m=" + std::to_string(m_star));
    }

    emit_box(bld, lambda, "lambda");
    if (with_closure) {
        emit_box(bld, xv, "x");
        emit_box(bld, yv, "y");
    }
    if (kind == LPKind::lp5_mixed) {
        emit_box(bld, l_sing, "lambda_sing");
        emit_box(bld, l_bad, "lambda_bad");
        emit_box(bld, l_good, "lambda_good");
        const Rational g(*gamma);
        {
            Coeffs r;
            add_coeff(r, l_sing, Rational(1));
            add_coeff(r, lambda, Rational(-1));
            bld.row(std::move(r), Rational(0), "link:sing");
        }
        {
            Coeffs r;
            add_coeff(r, l_good, Rational(1));
            add_coeff(r, lambda, Rational(-1));
            bld.row(std::move(r), Rational(0), "link:good");
        }
        {
            Coeffs r;
            add_coeff(r, l_bad, g);
            add_coeff(r, l_good, Rational(1));
            add_coeff(r, lambda, -(g + 1));
            bld.row(std::move(r), Rational(0), "link:mix");
        }
    }
    return lp;
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

SolveResult solve_lp(const LPInstance& lp) {
    const int n = static_cast<int>(lp.var_names.size());
    const int m = static_cast<int>(lp.constraints.size());
    if (lp.objective_var < 0 || lp.objective_var >= n)
        throw std::invalid_argument("solve_lp: objective variable is not set");
    std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
    std::vector<double> b(m, 0.0), c(n, 0.0);
    for (int i = 0; i < m; ++i) {
        for (const auto& [v, cf] : lp.constraints[i].terms) A[i][v] += to_double(cf);
        b[i] = to_double(lp.constraints[i].rhs);
    }
    c[lp.objective_var] = -1.0;

    SolveResult res;
    if (m == 0) {
        res.status = "optimal";
        for (const auto& nm : lp.var_names) res.assignment[nm] = 0.0;
        return res;
    }
    DenseSimplex<double> sx(A, b, c);
    std::vector<double> x;
    const int st = sx.solve(x);
    if (st == 1) {
        res.status = "infeasible";
        return res;
    }
    if (st == 2) {
        res.status = "unbounded";
        return res;
    }
    res.status = "optimal";
    for (int j = 0; j < n; ++j) res.assignment[lp.var_names[j]] = x[j];
    res.objective = x[lp.objective_var];

    std::vector<double> y(m, 0.0);
    for (int j = 0; j <= sx.n; ++j) {
        const int lbl = sx.N[j];
        if (lbl >= n && lbl < n + m) y[lbl - n] = sx.D[m][j];
    }
    double cx = 0.0, by = 0.0;
    for (int j = 0; j < n; ++j) cx += c[j] * x[j];
    for (int i = 0; i < m; ++i) by += b[i] * y[i];
    double gap = std::abs(cx - by);
    for (int i = 0; i < m; ++i) {
        double lhs = 0.0;
        for (const auto& [v, cf] : lp.constraints[i].terms) lhs += to_double(cf) * x[v];
        gap = std::max(gap, lhs - b[i]);
        gap = std::max(gap, -y[i]);
    }
    for (int j = 0; j < n; ++j) {
        double aty = 0.0;
        for (int i = 0; i < m; ++i) aty += A[i][j] * y[i];
        gap = std::max(gap, c[j] - aty);
        gap = std::max(gap, -x[j]);
    }
    res.duality_gap = gap;
    return res;
}

ExactSolveResult solve_lp_exact(const LPInstance& lp) {
    const int n = static_cast<int>(lp.var_names.size());
    const int m = static_cast<int>(lp.constraints.size());
    if (lp.objective_var < 0 || lp.objective_var >= n)
        throw std::invalid_argument("solve_lp_exact: objective variable is not set");
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> b(m, Rational(0)), c(n, Rational(0));
    for (int i = 0; i < m; ++i) {
        for (const auto& [v, cf] : lp.constraints[i].terms) A[i][v] += cf;
        b[i] = lp.constraints[i].rhs;
    }
    c[lp.objective_var] = Rational(-1);

    ExactSolveResult res;
    if (m == 0) {
        res.status = "optimal";
        for (const auto& nm : lp.var_names) res.assignment[nm] = Rational(0);
        return res;
    }
    DenseSimplex<Rational> sx(A, b, c);
    std::vector<Rational> x;
    const int st = sx.solve(x);
    if (st == 1) {
        res.status = "infeasible";
        return res;
    }
    if (st == 2) {
        res.status = "unbounded";
        return res;
    }
    res.status = "optimal";
    for (int j = 0; j < n; ++j) {
        if (x[j] < 0) throw std::logic_error("exact simplex produced a negative variable");
        res.assignment[lp.var_names[j]] = x[j];
    }
    for (int i = 0; i < m; ++i) {
        Rational lhs(0);
        for (const auto& [v, cf] : lp.constraints[i].terms) lhs += cf * x[v];
        if (lhs > b[i])
            throw std::logic_error("exact simplex produced an infeasible point at " +
                                   lp.constraints[i].tag);
    }
    res.objective = x[lp.objective_var];
    return res;
}

// ---------------------------------------------------------------------------
// Feasibility reports
// ---------------------------------------------------------------------------

std::vector<ConstraintSlack> check_feasible(const LPInstance& lp,
                                            const std::map<std::string, Rational>& assignment) {
    std::vector<ConstraintSlack> out;
    out.reserve(lp.constraints.size());
    std::vector<Rational> vals(lp.var_names.size(), Rational(0));
    for (size_t j = 0; j < lp.var_names.size(); ++j) {
        auto it = assignment.find(lp.var_names[j]);
        if (it != assignment.end()) vals[j] = it->second;
    }
    for (const auto& lc : lp.constraints) {
        Rational lhs(0);
        for (const auto& [v, cf] : lc.terms) lhs += cf * vals[v];
        out.push_back({lc.tag, lc.rhs - lhs});
    }
    return out;
}

bool is_feasible(const LPInstance& lp, const std::map<std::string, Rational>& assignment,
                 const Rational& tol) {
    for (const auto& cs : check_feasible(lp, assignment))
        if (cs.slack < -tol) return false;
    return true;
}

std::vector<std::string> tight_constraints(const LPInstance& lp,
                                           const std::map<std::string, Rational>& assignment,
                                           const Rational& tol) {
    std::vector<std::string> out;
    for (const auto& cs : check_feasible(lp, assignment))
        if (abs(cs.slack) <= tol) out.push_back(cs.tag);
    return out;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

Rational lp3_exact_optimum() { return Rational(11, 6); }

Rational lp4_exact_optimum() { return Rational(161, 88); }

DppReport verify_dpp_feasibility(const FlipParams& p) {
    const Rational lam = lp4_exact_optimum();
    const int nm = p.n_max();
    DppReport rep;
    auto flag = [&rep](const std::string& s) { rep.violations.push_back(s); };

    // per-size caps that drive every closure argument below
    const Rational third(1, 3);
    const Rational far_cap = (Rational(3) * lam - 5) / 2;
    for (int al = 1; al <= nm; ++al) {
        const Rational& pa = p.at(al);
        if (Rational(al) * pa > 1) flag("helper:cap:" + std::to_string(al));
        if (Rational(al - 1) * pa > third) flag("helper:near-cap:" + std::to_string(al));
        if (Rational(al - 2) * pa > far_cap) flag("helper:far-cap:" + std::to_string(al));
    }

    // worst unpaired branch cost, sizes 0..n_max on both sides
    Rational worst_pair(0);
    for (int a = 0; a <= nm; ++a)
        for (int b = 0; b <= nm; ++b) {
            Rational t = Rational(a) * p.at(a) + Rational(b) * p.at(b) -
                         std::min(p.at(a), p.at(b));
            worst_pair = std::max(worst_pair, t);
        }
    if (worst_pair > Rational(4, 3)) flag("helper:pair-bound");

    // with the caps above, size 3 closes with equality and larger sizes have slack
    if (2 * far_cap + 3 * Rational(4, 3) != Rational(-1) + 3 * lam) flag("closure:size-3");
    if (Rational(3) * lam - 4 > Rational(4) * (lam - Rational(4, 3))) flag("closure:size-4-up");
    if (lam <= Rational(4, 3)) flag("closure:slope");

    // disagreement-color templates reduce to the caps
    if (lam < 1) flag("special:tau-side");
    if (2 * lam < Rational(7, 3)) flag("special:sigma-side");

    for (const Configuration& cfg : enumerate_realizable(3, nm)) {
        const Rational bound = Rational(-1) + lam * cfg.m;
        if (cfg.special == SpecialCase::c_is_sigma_v) {
            if (oneside_lhs(cfg, p) > bound) flag("oneside:" + cfg.serialize());
            continue;
        }
        if (is_extremal(cfg)) continue;
        const Rational h = H_value(cfg, p);
        if (h > bound)
            flag(cfg.serialize());
        else if (h == bound && cfg.m == 2)
            rep.equality_set.push_back(cfg.serialize());
    }
    std::sort(rep.equality_set.begin(), rep.equality_set.end());
    rep.feasible = rep.violations.empty();
    return rep;
}

std::map<std::string, Rational> eq11_assignment() {
    const FlipParams p = FlipParams::vigoda_eq11();
    auto out = named_params(p);
    out["lambda"] = Rational(11, 6);
    out["x"] = x_completion(p, p.n_max());
    out["y"] = y_completion(p, p.n_max());
    return out;
}

std::map<std::string, Rational> obs51_assignment() {
    const FlipParams p = FlipParams::dpp_obs51();
    auto out = named_params(p);
    out["lambda"] = lp4_exact_optimum();
    out["x"] = x_completion(p, p.n_max());
    out["y"] = y_completion(p, p.n_max());
    return out;
}

std::map<std::string, Rational> eq12_assignment(double gamma) {
    const FlipParams p = FlipParams::cm_eq12();
    const int nm = p.n_max();
    const int m_star = 3;
    auto out = named_params(p);
    const Rational x = x_completion(p, nm);
    const Rational y = y_completion(p, nm);
    out["x"] = x;
    out["y"] = y;

    Rational l_sing(0), l_bad(0), l_good(0);
    for (const Configuration& cfg : enumerate_realizable(m_star, nm)) {
        if (cfg.special == SpecialCase::c_is_sigma_v) {
            l_good = std::max(l_good, Rational((Rational(1) + oneside_lhs(cfg, p)) / cfg.m));
            continue;
        }
        const Rational need = (Rational(1) + H_value(cfg, p)) / cfg.m;
        if (cfg.m == 1)
            l_sing = std::max(l_sing, need);
        else if (is_bad_template(cfg))
            l_bad = std::max(l_bad, need);
        else
            l_good = std::max(l_good, need);
    }
    l_good = std::max(l_good, Rational((Rational(1) + 2 * x + m_star * y) / m_star));

    const Rational g(gamma);
    const Rational mix((g * l_bad + l_good) / (g + 1));
    const Rational lam = std::max({l_sing, l_good, mix});
    out["lambda_sing"] = l_sing;
    out["lambda_bad"] = l_bad;
    out["lambda_good"] = l_good;
    out["lambda"] = lam;
    return out;
}

}  // namespace flip
