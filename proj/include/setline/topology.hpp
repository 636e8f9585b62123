#pragma once

// Point-set topology of the denoted sets, computed symbolically: closure,
// accumulation points, isolated points, iterated derived sets and the
// Cantor-Bendixson rank. Everything is exact; the oracle module provides the
// independent cross-check.

#include <optional>
#include <string>
#include <vector>

#include "setline/errors.hpp"
#include "setline/set_expr.hpp"
#include "setline/sum_solver.hpp"

namespace setline {

namespace detail {

inline SetExpr union_expr(std::vector<SetExpr> parts) {
    if (parts.empty()) throw std::logic_error("union_expr: empty");
    if (parts.size() == 1) return normalize(parts.front());
    return normalize(SetExpr{Union{std::move(parts)}});
}

inline SetExpr msum_expr(std::vector<SetExpr> parts) {
    if (parts.empty()) throw std::logic_error("msum_expr: empty");
    if (parts.size() == 1) return normalize(parts.front());
    return normalize(SetExpr{MSum{std::move(parts)}});
}

inline SetExpr closure_rec(const SetExpr& e) {
    if (e.is<Fin>() || e.is<Tail>()) return e;
    if (e.is<Geom>()) {
        Geom g = e.as<Geom>();
        g.with_limit = true;
        return SetExpr{g};
    }
    if (e.is<Union>()) {
        std::vector<SetExpr> kids;
        for (const auto& c : e.as<Union>().children) kids.push_back(closure_rec(c));
        return SetExpr{Union{std::move(kids)}};
    }
    if (e.is<MSum>()) {
        // Children are bounded (or the one tail part), so the closure of the
        // sum is the sum of the closures.
        std::vector<SetExpr> kids;
        for (const auto& c : e.as<MSum>().children) kids.push_back(closure_rec(c));
        return SetExpr{MSum{std::move(kids)}};
    }
    return closure_rec(normalize(e));
}

} // namespace detail

// Symbolic closure: adds every geometric limit, recursively.
inline SetExpr closure(const SetExpr& e) { return normalize(detail::closure_rec(normalize(e))); }

// True when every geometric part already carries its limit; such an
// expression denotes a closed set.
inline bool all_limits_present(const SetExpr& e) {
    if (e.is<Fin>() || e.is<Tail>()) return true;
    if (e.is<Geom>()) return e.as<Geom>().with_limit;
    if (e.is<Union>()) {
        for (const auto& c : e.as<Union>().children)
            if (!all_limits_present(c)) return false;
        return true;
    }
    if (e.is<MSum>()) {
        for (const auto& c : e.as<MSum>().children)
            if (!all_limits_present(c)) return false;
        return true;
    }
    return all_limits_present(normalize(e));
}

// The set of accumulation points (in R) of the denoted set, or nullopt when
// there are none. For a sum, a point accumulates exactly when some child
// coordinate can be an accumulation point while the others range over their
// closures; for the tail child nothing accumulates (translates stay locally
// finite).
inline std::optional<SetExpr> acc_points(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    if (e.is<Fin>() || e.is<Tail>()) return std::nullopt;
    if (e.is<Geom>()) return fin({e.as<Geom>().limit});
    if (e.is<Union>()) {
        std::vector<SetExpr> parts;
        for (const auto& c : e.as<Union>().children)
            if (auto a = acc_points(c)) parts.push_back(std::move(*a));
        if (parts.empty()) return std::nullopt;
        return detail::union_expr(std::move(parts));
    }
    const auto& kids = e.as<MSum>().children;
    std::vector<SetExpr> parts;
    for (std::size_t k = 0; k < kids.size(); ++k) {
        auto a = acc_points(kids[k]);
        if (!a) continue;
        std::vector<SetExpr> summands;
        for (std::size_t j = 0; j < kids.size(); ++j)
            summands.push_back(j == k ? *a : closure(kids[j]));
        parts.push_back(detail::msum_expr(std::move(summands)));
    }
    if (parts.empty()) return std::nullopt;
    return detail::union_expr(std::move(parts));
}

// discrete <=> no member is an accumulation point.
inline bool is_discrete(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    auto a = acc_points(e);
    if (!a) return true;
    return sets_disjoint(e, *a);
}

namespace detail {

// Does cell A syntactically sit inside cell B? Sufficient, not necessary:
// same base and tails, each geometric part matched exactly (a limit on the
// left needs one on the right), unmatched right parts contribute their limit.
inline bool cell_syntactic_subset(const Cell& a, const Cell& b) {
    if (!(a.base == b.base)) return false;
    std::vector<CellTail> bt = b.tails;
    for (const auto& t : a.tails) {
        auto it = std::find_if(bt.begin(), bt.end(), [&](const CellTail& u) {
            return u.up == t.up && u.step == t.step;
        });
        if (it == bt.end()) return false;
        bt.erase(it);
    }
    if (!bt.empty()) return false;
    std::vector<CellGeom> bg = b.geoms;
    for (const auto& g : a.geoms) {
        auto it = std::find_if(bg.begin(), bg.end(), [&](const CellGeom& h) {
            return h.scale == g.scale && h.ratio == g.ratio && (h.with_limit || !g.with_limit);
        });
        if (it == bg.end()) return false;
        bg.erase(it);
    }
    for (const auto& g : bg)
        if (!g.with_limit) return false;
    return true;
}

inline Rat cell_point(const Cell& c, long long idx) {
    Rat x = c.base;
    for (const auto& g : c.geoms) x += g.scale * pow(g.ratio, static_cast<unsigned long long>(idx));
    for (const auto& t : c.tails) x += (t.up ? t.step : -t.step) * Rat(idx);
    return x;
}

inline SetExpr cell_to_expr(const Cell& c) {
    std::vector<SetExpr> parts;
    for (const auto& g : c.geoms) parts.push_back(geom(Rat(0), g.scale, g.ratio, g.with_limit));
    for (const auto& t : c.tails) parts.push_back(tail(Rat(0), t.step, t.up));
    if (parts.empty()) return fin({c.base});
    parts.front() = normalize(affine(std::move(parts.front()), Rat(1), c.base));
    if (parts.size() == 1) return normalize(parts.front());
    return normalize(SetExpr{MSum{std::move(parts)}});
}

} // namespace detail

// closed <=> every accumulation point is a member. Decided by checking that
// each cell obtained by sending some geometric parts to their limits stays
// inside the set; a concrete escaping point refutes closedness exactly.
inline bool is_closed(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    if (all_limits_present(e)) return true;
    std::vector<Cell> cs = cells(e);
    for (const Cell& c : cs) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < c.geoms.size(); ++i)
            if (!c.geoms[i].with_limit) open.push_back(i);
        for (std::size_t mask = 1; mask < (std::size_t{1} << open.size()); ++mask) {
            Cell d{c.base, {}, c.tails};
            for (std::size_t i = 0; i < c.geoms.size(); ++i) {
                auto pos = std::find(open.begin(), open.end(), i);
                bool removed = pos != open.end() &&
                               (mask & (std::size_t{1} << static_cast<std::size_t>(pos - open.begin())));
                if (!removed) d.geoms.push_back(c.geoms[i]);
            }
            if (d.geoms.empty() && d.tails.empty()) {
                if (!member(e, d.base)) return false;
                continue;
            }
            bool matched = false;
            for (const Cell& host : cs)
                if (detail::cell_syntactic_subset(d, host)) { matched = true; break; }
            if (matched) continue;
            // Exact refutation: find a concrete limit point outside the set.
            bool refuted = false;
            for (long long idx = 0; idx <= 8 && !refuted; ++idx)
                if (!member(e, detail::cell_point(d, idx))) refuted = true;
            if (refuted) return false;
            throw UnsupportedError("cannot decide closedness of this expression");
        }
    }
    return true;
}

inline bool is_compact(const SetExpr& e) { return is_bounded(e) && is_closed(e); }

// ---------------------------------------------------------------------------
// Isolated points

namespace detail {

// Indices k with limit + scale*ratio^k equal to the point x (at most one).
inline std::optional<long long> geom_term_index(const Geom& g, const Rat& x) {
    Rat t = (x - g.limit) / g.scale;
    if (t.is_zero()) return std::nullopt;
    if (g.ratio.sign() > 0 && t.sign() <= 0) return std::nullopt;
    Rat p(1);
    long long k = 0;
    while (abs(p) > abs(t)) {
        p *= g.ratio;
        ++k;
    }
    if (p == t) return k;
    return std::nullopt;
}

// Geometric component minus finitely many term indices (limit dropped).
inline std::optional<SetExpr> geom_minus_terms(const Geom& g, std::vector<long long> drop) {
    std::sort(drop.begin(), drop.end());
    drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
    if (drop.empty()) return geom(g.limit, g.scale, g.ratio, false);
    long long kmax = drop.back();
    std::vector<Rat> head;
    for (long long k = 0; k <= kmax; ++k)
        if (!std::binary_search(drop.begin(), drop.end(), k))
            head.push_back(g.limit + g.scale * pow(g.ratio, static_cast<unsigned long long>(k)));
    SetExpr rest = geom(g.limit, g.scale * pow(g.ratio, static_cast<unsigned long long>(kmax + 1)),
                        g.ratio, false);
    if (head.empty()) return rest;
    return union_expr({fin(std::move(head)), std::move(rest)});
}

} // namespace detail

// Exact set difference on members: the members of e outside the set A, or
// nullopt when none remain. Representable when removals from each component
// are finitely many points, a whole component, or nothing; other shapes
// (index-tie families inside a sum) raise UnsupportedError.
inline std::optional<SetExpr> subtract_members(const SetExpr& e0, const SetExpr& A) {
    SetExpr e = normalize(e0);
    std::vector<Cell> a_cells = cells(A);

    std::vector<SetExpr> comps;
    if (e.is<Union>()) comps = e.as<Union>().children;
    else comps.push_back(e);

    std::vector<SetExpr> kept;
    for (const auto& comp : comps) {
        if (comp.is<Fin>()) {
            std::vector<Rat> pts;
            for (const auto& p : comp.as<Fin>().points)
                if (!member(A, p)) pts.push_back(p);
            if (!pts.empty()) kept.push_back(fin(std::move(pts)));
            continue;
        }
        if (comp.is<Geom>()) {
            const Geom& g = comp.as<Geom>();
            Cell terms_cell{g.limit, {CellGeom{g.scale, g.ratio, false}}, {}};
            std::vector<long long> drop;
            bool all_dropped = false;
            for (const Cell& d : a_cells) {
                if (d.geoms.empty() && d.tails.empty()) {
                    if (auto k = detail::geom_term_index(g, d.base)) drop.push_back(*k);
                    continue;
                }
                if (detail::cell_syntactic_subset(terms_cell, d)) { all_dropped = true; break; }
                if (cells_intersect(terms_cell, d))
                    throw UnsupportedError("set difference is not representable here");
            }
            if (all_dropped) continue;
            bool keep_limit = g.with_limit && !member(A, g.limit);
            if (keep_limit) {
                auto rest = detail::geom_minus_terms(g, std::move(drop));
                kept.push_back(rest ? detail::union_expr({fin({g.limit}), std::move(*rest)})
                                    : fin({g.limit}));
            } else if (auto rest = detail::geom_minus_terms(g, std::move(drop))) {
                kept.push_back(std::move(*rest));
            }
            continue;
        }
        if (comp.is<Tail>()) {
            const Tail& t = comp.as<Tail>();
            Cell tcell{t.start, {}, {CellTail{t.step, t.up}}};
            std::vector<BigInt> drop;
            bool all_dropped = false;
            for (const Cell& d : a_cells) {
                if (d.geoms.empty() && d.tails.empty()) {
                    Rat k = t.up ? (d.base - t.start) / t.step : (t.start - d.base) / t.step;
                    if (k.is_integer() && k.sign() >= 0) drop.push_back(k.num());
                    continue;
                }
                if (detail::cell_syntactic_subset(tcell, d)) { all_dropped = true; break; }
                if (cells_intersect(tcell, d))
                    throw UnsupportedError("set difference is not representable here");
            }
            if (all_dropped) continue;
            if (drop.empty()) {
                kept.push_back(comp);
                continue;
            }
            std::sort(drop.begin(), drop.end());
            drop.erase(std::unique(drop.begin(), drop.end()), drop.end());
            BigInt kmax = drop.back();
            std::vector<Rat> head;
            for (BigInt k(0); k <= kmax; k += BigInt(1))
                if (!std::binary_search(drop.begin(), drop.end(), k))
                    head.push_back(t.up ? t.start + t.step * Rat(k) : t.start - t.step * Rat(k));
            Rat new_start = t.up ? t.start + t.step * Rat(kmax + BigInt(1))
                                 : t.start - t.step * Rat(kmax + BigInt(1));
            SetExpr rest = tail(new_start, t.step, t.up);
            if (head.empty()) kept.push_back(std::move(rest));
            else kept.push_back(detail::union_expr({fin(std::move(head)), std::move(rest)}));
            continue;
        }
        // Sum component. Split every cell by which geometric parts sit at
        // their limit; the resulting term-only sub-cells cover the cell.
        // A sub-cell untouched by A survives whole, one inside A vanishes,
        // finitely many coincidences on a single geometric part are cut out.
        {
            std::vector<SetExpr> cell_exprs;
            for (const Cell& c : cells(comp)) {
                std::vector<std::size_t> wl;
                for (std::size_t i = 0; i < c.geoms.size(); ++i)
                    if (c.geoms[i].with_limit) wl.push_back(i);
                if (wl.size() > 16) throw UnsupportedError("too many limit choices in one cell");
                for (std::size_t mask = 0; mask < (std::size_t{1} << wl.size()); ++mask) {
                    Cell sub{c.base, {}, c.tails};
                    for (std::size_t i = 0; i < c.geoms.size(); ++i) {
                        auto pos = std::find(wl.begin(), wl.end(), i);
                        bool at_limit = pos != wl.end() &&
                                        (mask & (std::size_t{1} << static_cast<std::size_t>(pos - wl.begin())));
                        if (at_limit) continue;
                        CellGeom g = c.geoms[i];
                        g.with_limit = false;
                        sub.geoms.push_back(g);
                    }
                    if (sub.geoms.empty() && sub.tails.empty()) {
                        if (!member(A, sub.base)) cell_exprs.push_back(fin({sub.base}));
                        continue;
                    }
                    bool covered = false, hit = false;
                    for (const Cell& d : a_cells) {
                        if (detail::cell_syntactic_subset(sub, d)) { covered = true; break; }
                        if (cells_intersect(sub, d)) hit = true;
                    }
                    if (covered) continue;
                    if (!hit) {
                        cell_exprs.push_back(detail::cell_to_expr(sub));
                        continue;
                    }
                    if (sub.geoms.size() == 1 && sub.tails.empty()) {
                        Geom g{sub.base, sub.geoms[0].scale, sub.geoms[0].ratio, false};
                        auto cut = subtract_members(SetExpr{g}, A);
                        if (cut) cell_exprs.push_back(std::move(*cut));
                        continue;
                    }
                    throw UnsupportedError("set difference is not representable here");
                }
            }
            if (!cell_exprs.empty())
                kept.push_back(cell_exprs.size() == 1 ? std::move(cell_exprs.front())
                                                      : detail::union_expr(std::move(cell_exprs)));
        }
    }
    if (kept.empty()) return std::nullopt;
    return detail::union_expr(std::move(kept));
}

// Members that are not accumulation points, or nullopt when every member
// accumulates.
inline std::optional<SetExpr> iso_points(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    auto accs = acc_points(e);
    if (!accs) return e;
    return subtract_members(e, *accs);
}

// Derived set lpt(S) = S minus its isolated points; requires a closed input,
// where it coincides with the accumulation set.
inline std::optional<SetExpr> lpt_set(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    if (!is_closed(e))
        throw PreconditionError("lpt requires a closed set; apply closure first");
    return acc_points(e);
}

// ---------------------------------------------------------------------------
// Derivative chain and rank

struct TopoFacts {
    bool closed = false;
    bool compact = false;
    bool discrete = false;
    std::optional<SetExpr> acc;
    std::vector<SetExpr> chain; // X<0> = closure, then iterated derived sets, nonempty ones
    std::size_t rank = 0;       // index of the first empty derivative
};

inline TopoFacts derivative_chain(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    TopoFacts f;
    f.closed = is_closed(e);
    f.compact = is_bounded(e) && f.closed;
    f.discrete = is_discrete(e);
    f.acc = acc_points(e);
    SetExpr x = closure(e);
    f.chain.push_back(x);
    while (true) {
        auto next = acc_points(f.chain.back());
        if (!next) break;
        f.chain.push_back(std::move(*next));
        if (f.chain.size() > 64) throw std::logic_error("derivative chain failed to terminate");
    }
    f.rank = f.chain.size();
    return f;
}

inline std::size_t rank(const SetExpr& e) { return derivative_chain(e).rank; }

// Canonical decomposition of a closed set into rank-many discrete pieces:
// the isolated points of each derivative in turn.
inline std::vector<SetExpr> chain_decompose(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    if (!is_closed(e)) throw PreconditionError("chain decomposition requires a closed set");
    std::vector<SetExpr> pieces;
    SetExpr x = e;
    while (true) {
        auto next = acc_points(x);
        auto piece = iso_points(x);
        if (piece) pieces.push_back(std::move(*piece));
        if (!next) break;
        x = std::move(*next);
    }
    return pieces;
}

} // namespace setline
