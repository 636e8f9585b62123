#pragma once

// Exact decision engine for equations
//
//     sum_i  c_i * q_i^(x_{v(i)})  =  T,      x : vars -> N
//
// with rational c_i != 0 and ratios q_i in (0,1). Cell membership and
// cell-pair intersection reduce to finitely many such equations (geometric
// choices expanded, tail contributions enumerated over a bounded window).
//
// The search is branch-and-bound on exact bounds:
//   * T != 0: some term has magnitude >= |T|/n, which bounds its exponent;
//   * T == 0, all ratios equal: the minimal exponent can be taken to be 0;
//   * T == 0, mixed ratios: p-adic valuations either bound a variable or
//     force valuation ties that merge variables.
// Every branch strictly reduces the number of free variables, so the search
// terminates. Instances outside the decidable fragment (and a defensive
// budget fuse) raise UnsupportedError rather than answer wrongly.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "setline/errors.hpp"
#include "setline/rational.hpp"
#include "setline/set_expr.hpp"

namespace setline {

struct EqTerm {
    Rat coeff;  // nonzero
    Rat ratio;  // in (0,1)
    int var;
};

namespace solver_detail {

inline long long val_p(const BigInt& n, long long p) {
    if (n.is_zero()) throw std::logic_error("val_p of zero");
    long long v = 0;
    BigInt x = abs(n), q, r;
    const BigInt bp(p);
    while (true) {
        divmod(x, bp, q, r);
        if (!r.is_zero()) break;
        x = q;
        ++v;
    }
    return v;
}

inline long long val_p(const Rat& x, long long p) {
    return val_p(x.num(), p) - val_p(x.den(), p);
}

inline bool miller_rabin(unsigned long long n) {
    if (n < 2) return false;
    for (unsigned long long q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    unsigned long long d = n - 1;
    int s = 0;
    while ((d & 1ull) == 0) { d >>= 1; ++s; }
    auto mulmod = [&](unsigned long long a, unsigned long long b) {
        return static_cast<unsigned long long>(static_cast<unsigned __int128>(a) * b % n);
    };
    auto powmod = [&](unsigned long long a, unsigned long long e) {
        unsigned long long r = 1;
        while (e) {
            if (e & 1ull) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    for (unsigned long long a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        unsigned long long x = powmod(a % n, d);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Prime factors (set, no multiplicities). Throws UnsupportedError when a
// cofactor cannot be certified prime.
inline std::vector<long long> prime_factors(const BigInt& n0) {
    BigInt n = abs(n0);
    std::vector<long long> out;
    if (n <= BigInt(1)) return out;
    BigInt q, r;
    for (long long p = 2; p <= 100000; p += (p == 2 ? 1 : 2)) {
        if (n.fits_int64() && p > 1 && static_cast<__int128>(p) * p > n.as_int64()) break;
        divmod(n, BigInt(p), q, r);
        if (r.is_zero()) {
            out.push_back(p);
            while (r.is_zero()) {
                n = q;
                divmod(n, BigInt(p), q, r);
            }
        }
    }
    if (n > BigInt(1)) {
        if (!n.fits_int64() || !miller_rabin(static_cast<unsigned long long>(n.as_int64())))
            throw UnsupportedError("ratio has a factor too large to certify prime");
        out.push_back(n.as_int64());
    }
    return out;
}

struct Budget {
    long long nodes = 0;
    void tick() {
        if (++nodes > 400000) throw UnsupportedError("equation search budget exceeded");
    }
};

// Canonical cleanup: merge terms with equal (var, ratio), drop zero coeffs.
inline void tidy(std::vector<EqTerm>& ts) {
    std::sort(ts.begin(), ts.end(), [](const EqTerm& a, const EqTerm& b) {
        if (a.var != b.var) return a.var < b.var;
        return a.ratio < b.ratio;
    });
    std::vector<EqTerm> out;
    for (auto& t : ts) {
        if (!out.empty() && out.back().var == t.var && out.back().ratio == t.ratio) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(std::move(t));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const EqTerm& t) { return t.coeff.is_zero(); }),
              out.end());
    ts = std::move(out);
}

// Substitute x_v := value; removes the variable's terms and adjusts T.
inline void substitute(std::vector<EqTerm>& ts, Rat& T, int var, long long value) {
    std::vector<EqTerm> keep;
    for (auto& t : ts) {
        if (t.var == var) {
            T -= t.coeff * pow(t.ratio, static_cast<unsigned long long>(value));
        } else {
            keep.push_back(std::move(t));
        }
    }
    ts = std::move(keep);
}

bool solve_rec(std::vector<EqTerm> ts, Rat T, Budget& budget);

// T == 0, every ratio equal: relative to the minimal exponent, some term
// sits at exponent 0.
inline bool solve_zero_same_ratio(const std::vector<EqTerm>& ts, Budget& budget) {
    std::vector<int> vars;
    for (const auto& t : ts) vars.push_back(t.var);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    for (int v : vars) {
        std::vector<EqTerm> next = ts;
        Rat T2(0);
        substitute(next, T2, v, 0);
        if (solve_rec(std::move(next), std::move(T2), budget)) return true;
    }
    return false;
}

// T == 0, mixed ratios: p-adic analysis at one usable prime.
inline bool solve_zero_mixed(const std::vector<EqTerm>& ts, Budget& budget) {
    std::vector<long long> primes;
    for (const auto& t : ts) {
        for (long long p : prime_factors(t.ratio.num()))
            if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
        for (long long p : prime_factors(t.ratio.den()))
            if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
    }
    std::sort(primes.begin(), primes.end());

    const std::size_t n = ts.size();
    for (long long p : primes) {
        std::vector<std::size_t> neg;
        std::vector<long long> slope(n), cval(n);
        for (std::size_t i = 0; i < n; ++i) {
            slope[i] = val_p(ts[i].ratio, p);
            cval[i] = val_p(ts[i].coeff, p);
            if (slope[i] < 0) neg.push_back(i);
        }
        if (neg.empty()) continue;

        // Floor from the terms whose valuation cannot drop.
        std::optional<long long> floor_v;
        for (std::size_t i = 0; i < n; ++i) {
            if (slope[i] >= 0 && (!floor_v || cval[i] < *floor_v)) floor_v = cval[i];
        }

        // Detect the undecidable shape before committing to this prime: a
        // potential minimum-attaining pair on one variable whose valuations
        // agree identically gives no constraint at p.
        bool poisoned = false;
        for (std::size_t a = 0; a < neg.size() && !poisoned; ++a)
            for (std::size_t b = a + 1; b < neg.size() && !poisoned; ++b) {
                std::size_t i = neg[a], j = neg[b];
                if (ts[i].var == ts[j].var && slope[i] == slope[j] && cval[i] == cval[j])
                    poisoned = true;
            }
        if (poisoned) continue;

        // Branch group 1: the chosen negative-slope variable never dips
        // below the floor, which bounds it.
        if (floor_v) {
            std::size_t i0 = neg.front();
            long long bound = (cval[i0] - *floor_v) / (-slope[i0]);
            for (long long x = 0; x <= bound; ++x) {
                budget.tick();
                std::vector<EqTerm> next = ts;
                Rat T2(0);
                substitute(next, T2, ts[i0].var, x);
                if (solve_rec(std::move(next), std::move(T2), budget)) return true;
            }
        }

        // Branch group 2: a subset of negative-slope terms shares the
        // minimal valuation. Ties either pin a variable or merge variables.
        for (std::size_t mask = 1; mask < (std::size_t{1} << neg.size()); ++mask) {
            if (__builtin_popcountll(mask) < 2) continue;
            budget.tick();
            std::vector<std::size_t> A;
            for (std::size_t b = 0; b < neg.size(); ++b)
                if (mask & (std::size_t{1} << b)) A.push_back(neg[b]);

            // Within one variable, a tie either fixes it or is impossible.
            std::map<int, long long> fixed;
            bool impossible = false;
            for (std::size_t a = 0; a < A.size() && !impossible; ++a)
                for (std::size_t b = a + 1; b < A.size() && !impossible; ++b) {
                    std::size_t i = A[a], j = A[b];
                    if (ts[i].var != ts[j].var) continue;
                    if (slope[i] == slope[j]) {
                        if (cval[i] != cval[j]) impossible = true;
                        continue;
                    }
                    long long num = cval[j] - cval[i], den = slope[i] - slope[j];
                    if (num % den != 0 || num / den < 0) { impossible = true; continue; }
                    long long x = num / den;
                    auto it = fixed.find(ts[i].var);
                    if (it != fixed.end() && it->second != x) impossible = true;
                    else fixed[ts[i].var] = x;
                }
            if (impossible) continue;

            if (!fixed.empty()) {
                std::vector<EqTerm> next = ts;
                Rat T2(0);
                for (auto& [v, x] : fixed) substitute(next, T2, v, x);
                if (solve_rec(std::move(next), std::move(T2), budget)) return true;
                continue;
            }

            // Distinct variables: merge them along the tie line.
            std::vector<int> tie_vars;
            std::vector<std::size_t> rep; // one representative term per variable
            for (std::size_t i : A) {
                if (std::find(tie_vars.begin(), tie_vars.end(), ts[i].var) == tie_vars.end()) {
                    tie_vars.push_back(ts[i].var);
                    rep.push_back(i);
                }
            }
            if (tie_vars.size() < 2) continue; // no progress possible here

            long long L = 1;
            for (std::size_t i : rep) L = std::lcm(L, -slope[i]);
            // Common valuation V0: cval[i] - |slope_i| * alpha_i = V0 with
            // alpha_i in N; scan one lcm-window of candidates.
            long long vmax = cval[rep[0]];
            for (std::size_t i : rep) vmax = std::min(vmax, cval[i]);
            std::optional<long long> v0;
            for (long long cand = vmax; cand > vmax - L; --cand) {
                bool ok = true;
                for (std::size_t i : rep)
                    if ((cval[i] - cand) % (-slope[i]) != 0) { ok = false; break; }
                if (ok) { v0 = cand; break; }
            }
            if (!v0) continue;

            int fresh = 0;
            for (const auto& t : ts) fresh = std::max(fresh, t.var + 1);
            std::vector<EqTerm> next;
            bool bad = false;
            for (const auto& t : ts) {
                auto pos = std::find(tie_vars.begin(), tie_vars.end(), t.var);
                if (pos == tie_vars.end()) {
                    next.push_back(t);
                    continue;
                }
                std::size_t r = rep[static_cast<std::size_t>(pos - tie_vars.begin())];
                long long alpha = (cval[r] - *v0) / (-slope[r]);
                long long stride = L / (-slope[r]);
                EqTerm m;
                m.coeff = t.coeff * pow(t.ratio, static_cast<unsigned long long>(alpha));
                m.ratio = pow(t.ratio, static_cast<unsigned long long>(stride));
                m.var = fresh;
                if (abs(m.ratio) >= Rat(1)) { bad = true; break; }
                next.push_back(std::move(m));
            }
            if (bad) continue;
            if (solve_rec(std::move(next), Rat(0), budget)) return true;
        }
        return false; // usable prime fully analysed
    }
    throw UnsupportedError("zero-sum of mixed geometric ratios outside the decidable fragment");
}

inline bool solve_rec(std::vector<EqTerm> ts, Rat T, Budget& budget) {
    budget.tick();
    tidy(ts);
    if (ts.empty()) return T.is_zero();

    // Quick witness: all exponents zero.
    Rat all0(0);
    for (const auto& t : ts) all0 += t.coeff;
    if (all0 == T) return true;

    // Hull prune.
    Rat lo(0), hi(0);
    for (const auto& t : ts) {
        if (t.coeff.sign() > 0) hi += t.coeff;
        else lo += t.coeff;
    }
    if (T < lo || T > hi) return false;

    if (!T.is_zero()) {
        const Rat need = abs(T) / Rat(static_cast<long long>(ts.size()));
        bool any = false;
        for (const auto& t : ts) {
            Rat mag = abs(t.coeff);
            for (long long x = 0; mag >= need; ++x, mag *= t.ratio) {
                budget.tick();
                any = true;
                std::vector<EqTerm> next = ts;
                Rat T2 = T;
                substitute(next, T2, t.var, x);
                // Skip re-deriving the same branch from a sibling term of
                // the same variable: substitute() is idempotent per var, so
                // duplicates only cost time, not correctness.
                if (solve_rec(std::move(next), std::move(T2), budget)) return true;
            }
        }
        (void)any;
        return false;
    }

    if (ts.size() == 1) return false; // single nonzero term
    bool same = true;
    for (const auto& t : ts)
        if (!(t.ratio == ts.front().ratio)) { same = false; break; }
    if (same) return solve_zero_same_ratio(ts, budget);
    return solve_zero_mixed(ts, budget);
}

} // namespace solver_detail

// Decide existence of x : vars -> N with sum of c_i q_i^{x_{v(i)}} == T.
inline bool solve_terms(std::vector<EqTerm> terms, Rat target) {
    for (const auto& t : terms) {
        if (t.coeff.is_zero()) throw std::invalid_argument("solve_terms: zero coefficient");
        if (t.ratio.sign() <= 0 || t.ratio >= Rat(1))
            throw std::invalid_argument("solve_terms: ratio must be in (0,1)");
    }
    solver_detail::Budget budget;
    return solver_detail::solve_rec(std::move(terms), std::move(target), budget);
}

namespace solver_detail {

// One geometric part contributes one of: nothing (its limit, when allowed),
// or a positive-ratio term; negative ratios split into even/odd index terms.
struct GeomOption {
    bool zero;
    Rat coeff, ratio;
};

inline std::vector<GeomOption> options(const CellGeom& g) {
    std::vector<GeomOption> out;
    if (g.with_limit) out.push_back({true, Rat(0), Rat(0)});
    if (g.ratio.sign() > 0) {
        out.push_back({false, g.scale, g.ratio});
    } else {
        Rat q2 = g.ratio * g.ratio;
        out.push_back({false, g.scale, q2});
        out.push_back({false, g.scale * g.ratio, q2});
    }
    return out;
}

// Enumerate achievable tail contributions within [lo, hi]. Supports at most
// two tail parts (a cell of the grammar has at most one; differences of two
// cells have at most two).
inline std::vector<Rat> tail_values(const std::vector<CellTail>& tails, const Rat& lo, const Rat& hi) {
    if (lo > hi) return {};
    if (tails.empty()) {
        if (lo <= Rat(0) && Rat(0) <= hi) return {Rat(0)};
        return {};
    }
    auto one = [&](const CellTail& t, const Rat& a, const Rat& b) {
        std::vector<Rat> vs;
        if (a > b) return vs;
        Rat step = t.up ? t.step : -t.step;
        // l*step in [a,b], l >= 0
        Rat lmin = t.up ? a / t.step : b / (-t.step);
        Rat lmax = t.up ? b / t.step : a / (-t.step);
        BigInt l0 = lmin.ceil(), l1 = lmax.floor();
        if (l0.sign() < 0) l0 = BigInt(0);
        BigInt count = l1 - l0 + BigInt(1);
        if (count.sign() <= 0) return vs;
        if (!count.fits_int64() || count.as_int64() > 200000)
            throw UnsupportedError("tail window too large");
        for (BigInt l = l0; l <= l1; l += BigInt(1)) vs.push_back(step * Rat(l));
        return vs;
    };
    if (tails.size() == 1) return one(tails[0], lo, hi);
    if (tails.size() != 2) throw UnsupportedError("more than two tail parts in one equation");

    const CellTail &t1 = tails[0], &t2 = tails[1];
    std::vector<Rat> vs;
    if (t1.up == t2.up) {
        // l1*d1 + l2*d2, both contributions of one sign; iterate the first.
        long long guard = 0;
        for (BigInt l1i(0);; l1i += BigInt(1)) {
            Rat v1 = (t1.up ? t1.step : -t1.step) * Rat(l1i);
            if (t1.up ? v1 > hi : v1 < lo) break;
            for (Rat v2 : one(t2, lo - v1, hi - v1)) vs.push_back(v1 + v2);
            if (++guard > 4000) throw UnsupportedError("tail window too large");
        }
    } else {
        // l1*d1 - l2*d2 reaches every multiple of gcd(d1, d2) in the window.
        Rat g = rat_gcd(t1.step, t2.step);
        BigInt k0 = (lo / g).ceil(), k1 = (hi / g).floor();
        BigInt span = k1 - k0 + BigInt(1);
        if (!span.fits_int64() || span.as_int64() > 200000)
            throw UnsupportedError("tail window too large");
        for (BigInt k = k0; k <= k1; k += BigInt(1)) vs.push_back(g * Rat(k));
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

inline bool solve_cell_equation(const std::vector<CellGeom>& geoms, const std::vector<CellTail>& tails,
                                const Rat& target) {
    std::vector<std::vector<GeomOption>> opts;
    opts.reserve(geoms.size());
    for (const auto& g : geoms) opts.push_back(options(g));

    std::vector<std::size_t> pick(geoms.size(), 0);
    while (true) {
        std::vector<EqTerm> terms;
        int var = 0;
        for (std::size_t i = 0; i < geoms.size(); ++i) {
            const GeomOption& o = opts[i][pick[i]];
            if (!o.zero) terms.push_back(EqTerm{o.coeff, o.ratio, var++});
        }
        Rat lo(0), hi(0);
        for (const auto& t : terms) {
            if (t.coeff.sign() > 0) hi += t.coeff;
            else lo += t.coeff;
        }
        for (const Rat& w : tail_values(tails, target - hi, target - lo)) {
            if (solve_terms(terms, target - w)) return true;
        }
        // next combination
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < opts[i].size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    return false;
}

} // namespace solver_detail

// Exact: does the cell contain the point x?
inline bool cell_contains(const Cell& c, const Rat& x) {
    return solver_detail::solve_cell_equation(c.geoms, c.tails, x - c.base);
}

// Exact: do two cells share a point?
inline bool cells_intersect(const Cell& a, const Cell& b) {
    std::vector<CellGeom> geoms = a.geoms;
    for (const auto& g : b.geoms) geoms.push_back(CellGeom{-g.scale, g.ratio, g.with_limit});
    std::vector<CellTail> tails = a.tails;
    for (const auto& t : b.tails) tails.push_back(CellTail{t.step, !t.up});
    return solver_detail::solve_cell_equation(geoms, tails, b.base - a.base);
}

// Exact membership in the denoted set.
inline bool member(const SetExpr& e, const Rat& x) {
    if (e.is<Fin>() || e.is<Geom>() || e.is<Tail>()) return leaf_member(e, x);
    for (const Cell& c : cells(e))
        if (cell_contains(c, x)) return true;
    return false;
}

// Exact emptiness of the intersection of two denoted sets.
inline bool sets_disjoint(const SetExpr& a, const SetExpr& b) {
    std::vector<Cell> ca = cells(a), cb = cells(b);
    for (const Cell& x : ca)
        for (const Cell& y : cb)
            if (cells_intersect(x, y)) return false;
    return true;
}

} // namespace setline
