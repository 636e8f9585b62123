#pragma once

// Combining a compact set with an unbounded discrete closed one: translates
// of the compact part along every M-th member of the tail order strictly,
// so each family splits into discrete pieces inherited from the compact
// part's own decomposition. Also exact sums of rational tails (numerical
// semigroups) and the exact minimum gap of a tail union.

#include <string>
#include <vector>

#include "setline/decompose.hpp"
#include "setline/errors.hpp"
#include "setline/topology.hpp"

namespace setline {

namespace detail {

struct TailLeaf {
    Rat start, step;
    bool up;
};

inline void collect_tailish(const SetExpr& e, std::vector<TailLeaf>& tails, std::vector<Rat>& fins) {
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        tails.push_back({t.start, t.step, t.up});
        return;
    }
    if (e.is<Fin>()) {
        for (const auto& p : e.as<Fin>().points) fins.push_back(p);
        return;
    }
    if (e.is<Union>()) {
        for (const auto& c : e.as<Union>().children) collect_tailish(c, tails, fins);
        return;
    }
    throw ValidationError("expected a tail or a union of tails and finite sets");
}

// Nearest distance from x to {start +- k*step : k >= 0}, omitting exact hits.
inline void tail_point_gaps(const TailLeaf& t, const Rat& x, std::vector<Rat>& out) {
    Rat pos = t.up ? (x - t.start) / t.step : (t.start - x) / t.step;
    if (pos.sign() < 0) {
        out.push_back(abs(x - t.start));
        return;
    }
    BigInt k0 = pos.floor();
    for (BigInt k = k0; k <= k0 + BigInt(1); k += BigInt(1)) {
        if (k.sign() < 0) continue;
        Rat member = t.up ? t.start + t.step * Rat(k) : t.start - t.step * Rat(k);
        Rat d = abs(x - member);
        if (!d.is_zero()) out.push_back(d);
    }
}

// Members of the numerical semigroup of {alpha, beta} (coprime) up to bound.
inline std::vector<long long> semigroup_members(long long alpha, long long beta, long long bound) {
    std::vector<char> reach(static_cast<std::size_t>(bound) + 1, 0);
    reach[0] = 1;
    for (long long v = 0; v <= bound; ++v) {
        if (!reach[static_cast<std::size_t>(v)]) continue;
        if (v + alpha <= bound) reach[static_cast<std::size_t>(v + alpha)] = 1;
        if (v + beta <= bound) reach[static_cast<std::size_t>(v + beta)] = 1;
    }
    std::vector<long long> out;
    for (long long v = 0; v <= bound; ++v)
        if (reach[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

} // namespace detail

// Exact infimum of distances between distinct members of a tail union.
inline Rat exact_min_gap(const SetExpr& e0) {
    SetExpr e = normalize(e0);
    std::vector<detail::TailLeaf> tails;
    std::vector<Rat> fins;
    detail::collect_tailish(e, tails, fins);
    if (tails.empty() && fins.size() < 2)
        throw ValidationError("min gap needs at least two members");

    std::vector<Rat> cand;
    for (const auto& t : tails) cand.push_back(t.step);
    std::sort(fins.begin(), fins.end());
    for (std::size_t i = 1; i < fins.size(); ++i) cand.push_back(fins[i] - fins[i - 1]);
    for (const auto& p : fins)
        for (const auto& t : tails) detail::tail_point_gaps(t, p, cand);

    for (std::size_t i = 0; i < tails.size(); ++i) {
        for (std::size_t j = i + 1; j < tails.size(); ++j) {
            const auto &a = tails[i], &b = tails[j];
            Rat g = rat_gcd(a.step, b.step);
            Rat delta = a.start - b.start;
            if (a.up == b.up) {
                // differences sweep the whole lattice delta + g*Z
                Rat rem = delta - g * Rat((delta / g).floor());
                if (!rem.is_zero()) {
                    cand.push_back(rem);
                    cand.push_back(g - rem);
                } else {
                    cand.push_back(g);
                }
            } else {
                // one-sided: differences are delta +- semigroup values
                long long alpha = (a.step / g).floor().fits_int64() ? (a.step / g).floor().as_int64() : 0;
                long long beta = (b.step / g).floor().fits_int64() ? (b.step / g).floor().as_int64() : 0;
                if (alpha <= 0 || beta <= 0 || alpha > 2000 || beta > 2000)
                    throw UnsupportedError("tail steps too dissimilar for exact gap");
                // x_a - x_b = delta + s*(k*alpha + l*beta)*g, s = +-1 by direction
                Rat sgn = a.up ? Rat(1) : Rat(-1);
                Rat target = -(delta / (g * sgn)); // want semigroup value near this
                long long frob = alpha * beta;
                long long lo = 0;
                if (target.sign() > 0) {
                    BigInt f = target.floor();
                    lo = f.fits_int64() ? std::max(0ll, f.as_int64() - frob - 2) : 0;
                }
                long long hi = lo + 2 * frob + 4;
                if (target.sign() > 0) {
                    BigInt c = target.ceil();
                    if (c.fits_int64()) hi = std::max(hi, c.as_int64() + frob + 2);
                }
                for (long long v : detail::semigroup_members(alpha, beta, hi)) {
                    if (v < lo) continue;
                    Rat diff = delta + sgn * g * Rat(v);
                    if (!diff.is_zero()) cand.push_back(abs(diff));
                }
            }
        }
    }
    Rat best = cand.front();
    for (const auto& c : cand) best = std::min(best, c);
    return best;
}

// Exact Minkowski sum of one-sided rational tails, as a finite set plus
// full arithmetic tails (numerical-semigroup normal form).
inline SetExpr sum_of_tails(const std::vector<SetExpr>& tail_leaves) {
    if (tail_leaves.empty()) throw ValidationError("sum_of_tails: no children");
    auto sum_two = [](const Tail& a, const Tail& b) -> SetExpr {
        Rat base = a.start + b.start;
        Rat g = rat_gcd(a.step, b.step);
        if (a.up != b.up)
            return normalize(union_of({tail(base, g, true), tail(base - g, g, false)}));
        BigInt ab = (a.step / g).floor(), bb = (b.step / g).floor();
        if (!ab.fits_int64() || !bb.fits_int64())
            throw UnsupportedError("tail steps too dissimilar to combine");
        long long alpha = ab.as_int64(), beta = bb.as_int64();
        if (alpha * beta > 1000000) throw UnsupportedError("tail steps too dissimilar to combine");
        long long conductor = (alpha - 1) * (beta - 1);
        std::vector<Rat> sporadic;
        for (long long v : detail::semigroup_members(alpha, beta, conductor)) {
            if (v >= conductor) break;
            sporadic.push_back(a.up ? base + g * Rat(v) : base - g * Rat(v));
        }
        SetExpr rest = tail(a.up ? base + g * Rat(conductor) : base - g * Rat(conductor), g, a.up);
        if (sporadic.empty()) return rest;
        return normalize(union_of({fin(std::move(sporadic)), std::move(rest)}));
    };

    SetExpr acc = normalize(tail_leaves.front());
    for (std::size_t i = 1; i < tail_leaves.size(); ++i) {
        SetExpr t = normalize(tail_leaves[i]);
        if (!t.is<Tail>()) throw ValidationError("sum_of_tails: children must be tails");
        std::vector<SetExpr> comps;
        if (acc.is<Union>()) comps = acc.as<Union>().children;
        else comps.push_back(acc);
        std::vector<SetExpr> parts;
        for (const auto& c : comps) {
            if (c.is<Fin>()) {
                for (const auto& p : c.as<Fin>().points)
                    parts.push_back(normalize(affine(t, Rat(1), p)));
            } else if (c.is<Tail>()) {
                parts.push_back(sum_two(c.as<Tail>(), t.as<Tail>()));
            } else {
                throw ValidationError("sum_of_tails: unexpected component");
            }
        }
        acc = parts.size() == 1 ? parts.front() : normalize(SetExpr{Union{std::move(parts)}});
    }
    return acc;
}

struct TailFamily {
    long long index = 0;                // 1..M
    std::vector<Rat> translates;        // the tail members used by this family
    std::vector<SetExpr> sub_pieces;    // discrete pieces covering the family
};

struct TailCombinePlan {
    SetExpr compact_part, tail_part;    // normalized Y and Z
    Rat shift;                          // added to Y to place its minimum at 0
    Rat gap;                            // d, exact minimum gap of Z
    Rat diameter;                       // of Y
    Rat bound_n;                        // least integer N >= diameter
    long long modulus = 0;              // least M with M*d > N
    long long window_lo = 0, window_hi = 0;
    std::vector<Rat> iota;              // iota(window_lo..window_hi), ascending
    std::vector<TailFamily> families;   // M families
    bool ordering_verified = false;     // adjacent translates separated by > diameter
};

inline TailCombinePlan tail_combine(const SetExpr& Y0, const SetExpr& Z0, long long window_lo = -20,
                                    long long window_hi = 20,
                                    const std::vector<SetExpr>* y_decomposition = nullptr) {
    if (window_lo > window_hi) throw ValidationError("tail_combine: empty window");
    SetExpr Y = normalize(Y0);
    if (!is_bounded(Y) || !is_closed(Y))
        throw PreconditionError("tail_combine: Y must be compact");
    SetExpr Z = normalize(Z0);
    if (is_bounded(Z) || !is_tailish(Z))
        throw ValidationError("tail_combine: Z must be an unbounded tail or union of tails");

    TailCombinePlan plan;
    plan.compact_part = Y;
    plan.tail_part = Z;
    Bounds yb = bounds(Y);
    plan.shift = -*yb.lo;
    plan.diameter = *yb.hi - *yb.lo;
    plan.bound_n = Rat(plan.diameter.ceil());
    plan.gap = exact_min_gap(Z);
    Rat m_exact = plan.bound_n / plan.gap;
    BigInt m_floor = m_exact.floor();
    if (!m_floor.fits_int64() || m_floor.as_int64() > 1000000)
        throw UnsupportedError("tail_combine: modulus too large");
    plan.modulus = m_floor.as_int64() + 1;

    // Enumerate Z members around the anchor and realize the index window.
    std::vector<detail::TailLeaf> tails;
    std::vector<Rat> fins;
    detail::collect_tailish(Z, tails, fins);
    bool has_up = false, has_down = false;
    for (const auto& t : tails) (t.up ? has_up : has_down) = true;

    Rat anchor(0);
    if (has_up && has_down) {
        // least member >= 0
        std::optional<Rat> best;
        for (const auto& t : tails) {
            Rat first;
            if (t.up) {
                if (t.start >= Rat(0)) first = t.start;
                else first = t.start + t.step * Rat(((Rat(0) - t.start) / t.step).ceil());
            } else {
                if (t.start < Rat(0)) continue;
                Rat steps_down = ((t.start - Rat(0)) / t.step).floor();
                first = t.start - t.step * Rat(steps_down);
            }
            if (!best || first < *best) best = first;
        }
        for (const auto& p : fins)
            if (p >= Rat(0) && (!best || p < *best)) best = p;
        anchor = *best;
    } else if (has_up) {
        anchor = *bounds(Z).lo;
    } else {
        anchor = *bounds(Z).hi;
    }

    long long lo = has_down ? window_lo : std::max(window_lo, 0ll);
    long long hi = has_up ? window_hi : std::min(window_hi, 0ll);
    if (lo > hi) throw ValidationError("tail_combine: window misses the tail support");

    long long need_above = hi + 1 + static_cast<long long>(fins.size()) + 4;
    long long need_below = -lo + static_cast<long long>(fins.size()) + 4;
    std::vector<Rat> above, below;
    for (const auto& t : tails) {
        if (t.up) {
            Rat k0 = t.start >= anchor ? Rat(0) : Rat(((anchor - t.start) / t.step).ceil());
            for (long long j = 0; j <= need_above; ++j) above.push_back(t.start + t.step * (k0 + Rat(j)));
            for (Rat k = k0 - Rat(1); k.sign() >= 0 && static_cast<long long>(below.size()) <= need_below + 64;
                 k -= Rat(1)) {
                Rat v = t.start + t.step * k;
                if (v < anchor) below.push_back(v);
            }
        } else {
            Rat k0 = t.start < anchor ? Rat(0) : Rat(((t.start - anchor) / t.step).floor() + BigInt(1));
            for (long long j = 0; j <= need_below; ++j) below.push_back(t.start - t.step * (k0 + Rat(j)));
            for (Rat k = k0 - Rat(1); k.sign() >= 0; k -= Rat(1)) {
                Rat v = t.start - t.step * k;
                if (v >= anchor) above.push_back(v);
                else break;
            }
        }
    }
    for (const auto& p : fins) (p >= anchor ? above : below).push_back(p);
    std::sort(above.begin(), above.end());
    above.erase(std::unique(above.begin(), above.end()), above.end());
    std::sort(below.begin(), below.end(), [](const Rat& a, const Rat& b) { return b < a; });
    below.erase(std::unique(below.begin(), below.end()), below.end());

    if (static_cast<long long>(above.size()) <= hi || static_cast<long long>(below.size()) < -lo)
        throw ValidationError("tail_combine: window exceeds the enumerable range");
    plan.window_lo = lo;
    plan.window_hi = hi;
    for (long long n = lo; n < 0; ++n) plan.iota.push_back(below[static_cast<std::size_t>(-n - 1)]);
    for (long long n = std::max(lo, 0ll); n <= hi; ++n)
        plan.iota.push_back(above[static_cast<std::size_t>(n)]);

    // Discrete pieces of Y, reused by every family.
    std::vector<SetExpr> ypieces = y_decomposition ? *y_decomposition : chain_decompose(Y);

    plan.ordering_verified = true;
    for (long long i = 1; i <= plan.modulus; ++i) {
        TailFamily fam;
        fam.index = i;
        for (long long n = lo; n <= hi; ++n) {
            long long residue = ((n % plan.modulus) + plan.modulus) % plan.modulus;
            if (residue == i % plan.modulus)
                fam.translates.push_back(plan.iota[static_cast<std::size_t>(n - lo)]);
        }
        for (std::size_t j = 1; j < fam.translates.size(); ++j)
            if (!(fam.translates[j] - fam.translates[j - 1] > plan.diameter))
                plan.ordering_verified = false;
        if (!fam.translates.empty()) {
            for (const auto& piece : ypieces) {
                std::vector<SetExpr> translated;
                for (const auto& t : fam.translates)
                    translated.push_back(normalize(affine(piece, Rat(1), t)));
                fam.sub_pieces.push_back(translated.size() == 1
                                             ? translated.front()
                                             : normalize(SetExpr{Union{std::move(translated)}}));
            }
        }
        plan.families.push_back(std::move(fam));
    }
    if (!plan.ordering_verified)
        throw std::logic_error("tail_combine: ordering relation failed on the truncation");
    return plan;
}

} // namespace setline
