#pragma once

// Independent brute-force cross-checker: depth-bounded enumeration with an
// exact bound on how far any omitted member can sit from the enumerated
// prefix, plus accumulation/isolation probes built only on that enumeration.
// Deliberately knows nothing about the symbolic topology engine.

#include <algorithm>
#include <optional>
#include <vector>

#include "setline/errors.hpp"
#include "setline/rational.hpp"
#include "setline/set_expr.hpp"

namespace setline::oracle {

struct Enumeration {
    SetExpr source;
    long long depth = 0;
    std::vector<Rat> points;       // strictly increasing
    std::optional<Rat> tail_bound; // nullopt = unbounded (a tail ran off the window)
};

struct EpsSchedule {
    Rat eps0 = Rat(1);
    int steps = 12;
};

enum class Probe { Confirmed, Unknown };

namespace detail {

struct RawEnum {
    std::vector<Rat> points;
    std::optional<Rat> tail_bound;
};

inline RawEnum enumerate_rec(const SetExpr& e, long long depth) {
    if (e.is<Fin>()) return {e.as<Fin>().points, Rat(0)};
    if (e.is<Geom>()) {
        const auto& g = e.as<Geom>();
        RawEnum r;
        if (g.with_limit) r.points.push_back(g.limit);
        Rat term = g.scale;
        for (long long k = 0; k < depth; ++k) {
            r.points.push_back(g.limit + term);
            term *= g.ratio;
        }
        r.tail_bound = abs(g.scale) * pow(abs(g.ratio), static_cast<unsigned long long>(depth));
        std::sort(r.points.begin(), r.points.end());
        r.points.erase(std::unique(r.points.begin(), r.points.end()), r.points.end());
        return r;
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        RawEnum r;
        Rat x = t.start;
        for (long long k = 0; k < depth; ++k) {
            r.points.push_back(x);
            x = t.up ? x + t.step : x - t.step;
        }
        if (!t.up) std::reverse(r.points.begin(), r.points.end());
        r.tail_bound = std::nullopt;
        return r;
    }
    if (e.is<Union>()) {
        RawEnum r;
        r.tail_bound = Rat(0);
        for (const auto& c : e.as<Union>().children) {
            RawEnum cr = enumerate_rec(c, depth);
            r.points.insert(r.points.end(), cr.points.begin(), cr.points.end());
            if (!cr.tail_bound) r.tail_bound = std::nullopt;
            else if (r.tail_bound && *cr.tail_bound > *r.tail_bound) r.tail_bound = cr.tail_bound;
        }
        std::sort(r.points.begin(), r.points.end());
        r.points.erase(std::unique(r.points.begin(), r.points.end()), r.points.end());
        return r;
    }
    if (e.is<MSum>()) {
        RawEnum r{{Rat(0)}, Rat(0)};
        for (const auto& c : e.as<MSum>().children) {
            RawEnum cr = enumerate_rec(c, depth);
            std::vector<Rat> next;
            next.reserve(r.points.size() * cr.points.size());
            for (const auto& a : r.points)
                for (const auto& b : cr.points) next.push_back(a + b);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            if (next.size() > 2000000) throw UnsupportedError("enumeration too large");
            r.points = std::move(next);
            if (!cr.tail_bound || !r.tail_bound) r.tail_bound = std::nullopt;
            else r.tail_bound = *r.tail_bound + *cr.tail_bound;
        }
        return r;
    }
    return enumerate_rec(normalize(e), depth);
}

struct Interval {
    std::optional<Rat> lo, hi; // nullopt = unbounded on that side
};

inline Rat dist_to_interval(const Rat& x, const Interval& iv) {
    if (iv.lo && x < *iv.lo) return *iv.lo - x;
    if (iv.hi && x > *iv.hi) return x - *iv.hi;
    return Rat(0);
}

inline Interval full_hull(const SetExpr& e) {
    Bounds b = bounds(e);
    return {b.lo, b.hi};
}

inline Interval hull_sum(const Interval& a, const Interval& b) {
    Interval r;
    if (a.lo && b.lo) r.lo = *a.lo + *b.lo;
    if (a.hi && b.hi) r.hi = *a.hi + *b.hi;
    return r;
}

// Hull of the points the depth-truncation omits; nullopt when nothing is.
inline std::optional<Interval> omitted_hull(const SetExpr& e, long long depth) {
    if (e.is<Fin>()) return std::nullopt;
    if (e.is<Geom>()) {
        // Omitted terms lie between the limit and the first omitted term
        // (one more step when the ratio alternates signs).
        const auto& g = e.as<Geom>();
        Rat t0 = g.scale * pow(g.ratio, static_cast<unsigned long long>(depth));
        Rat t1 = t0 * g.ratio;
        Rat lo = std::min({Rat(0), t0, t1});
        Rat hi = std::max({Rat(0), t0, t1});
        return Interval{g.limit + lo, g.limit + hi};
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        Rat edge = t.up ? t.start + t.step * Rat(depth) : t.start - t.step * Rat(depth);
        if (t.up) return Interval{edge, std::nullopt};
        return Interval{std::nullopt, edge};
    }
    if (e.is<Union>()) {
        std::optional<Interval> r;
        for (const auto& c : e.as<Union>().children) {
            auto h = omitted_hull(c, depth);
            if (!h) continue;
            if (!r) { r = h; continue; }
            if (!h->lo || (r->lo && *h->lo < *r->lo)) r->lo = h->lo;
            if (!h->hi || (r->hi && *h->hi > *r->hi)) r->hi = h->hi;
        }
        return r;
    }
    if (e.is<MSum>()) {
        const auto& kids = e.as<MSum>().children;
        std::optional<Interval> r;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            auto h = omitted_hull(kids[i], depth);
            if (!h) continue;
            Interval region = *h;
            for (std::size_t j = 0; j < kids.size(); ++j)
                if (j != i) region = hull_sum(region, full_hull(kids[j]));
            if (!r) { r = region; continue; }
            if (!region.lo || (r->lo && *region.lo < *r->lo)) r->lo = region.lo;
            if (!region.hi || (r->hi && *region.hi > *r->hi)) r->hi = region.hi;
        }
        return r;
    }
    return omitted_hull(normalize(e), depth);
}

std::optional<Rat> omitted_distance_rec(const SetExpr& e, const Rat& x, long long depth);

// An omitted sum picks a nonempty set O of coordinates whose members go
// missing, while the others take enumerated values exactly; so the distance
// to any omitted sum is bounded below per O by the distance from x minus an
// enumerated rest-sum to the summed omitted hulls of O.
inline std::optional<Rat> omitted_distance_msum(const std::vector<SetExpr>& kids, const Rat& x,
                                                long long depth) {
    std::vector<std::optional<Interval>> hulls;
    bool any = false;
    for (const auto& k : kids) {
        hulls.push_back(omitted_hull(k, depth));
        if (hulls.back()) any = true;
    }
    if (!any) return std::nullopt;
    std::optional<Rat> best;
    for (std::size_t mask = 1; mask < (std::size_t{1} << kids.size()); ++mask) {
        std::optional<Interval> hull;
        bool valid = true;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            if (!hulls[i]) { valid = false; break; }
            hull = hull ? hull_sum(*hull, *hulls[i]) : *hulls[i];
        }
        if (!valid) continue;
        std::vector<Rat> rest{Rat(0)};
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (mask & (std::size_t{1} << i)) continue;
            RawEnum en = enumerate_rec(kids[i], depth);
            std::vector<Rat> next;
            next.reserve(rest.size() * en.points.size());
            for (const auto& a : rest)
                for (const auto& b : en.points) next.push_back(a + b);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            rest = std::move(next);
        }
        for (const auto& t : rest) {
            Rat d = dist_to_interval(x - t, *hull);
            if (!best || d < *best) best = d;
            if (best->is_zero()) return best;
        }
    }
    return best;
}

inline std::optional<Rat> omitted_distance_rec(const SetExpr& e, const Rat& x, long long depth) {
    if (e.is<Fin>()) return std::nullopt;
    if (e.is<Geom>() || e.is<Tail>()) {
        auto h = omitted_hull(e, depth);
        return dist_to_interval(x, *h);
    }
    if (e.is<Union>()) {
        std::optional<Rat> best;
        for (const auto& c : e.as<Union>().children) {
            auto d = omitted_distance_rec(c, x, depth);
            if (d && (!best || *d < *best)) best = d;
        }
        return best;
    }
    if (e.is<MSum>()) return omitted_distance_msum(e.as<MSum>().children, x, depth);
    return omitted_distance_rec(normalize(e), x, depth);
}

} // namespace detail

inline Enumeration enumerate(const SetExpr& e0, long long depth) {
    if (depth <= 0) throw ValidationError("enumerate: depth must be positive");
    SetExpr e = normalize(e0);
    detail::RawEnum r = detail::enumerate_rec(e, depth);
    return Enumeration{std::move(e), depth, std::move(r.points), std::move(r.tail_bound)};
}

// Exact lower bound on the distance from x to any omitted member;
// nullopt means nothing was omitted.
inline std::optional<Rat> omitted_distance(const SetExpr& e, const Rat& x, long long depth) {
    return detail::omitted_distance_rec(normalize(e), x, depth);
}

// Confirmed means: for every epsilon in the schedule some enumerated member
// distinct from x lies within epsilon. Sound; Unknown is not a refutation.
inline Probe accumulation_probe(const SetExpr& e, const Rat& x, long long depth,
                                const EpsSchedule& sched = {}) {
    if (sched.eps0.sign() <= 0 || sched.steps < 0)
        throw ValidationError("accumulation_probe: bad schedule");
    Enumeration en = enumerate(e, depth);
    std::optional<Rat> nearest;
    for (const auto& p : en.points) {
        if (p == x) continue;
        Rat d = abs(p - x);
        if (!nearest || d < *nearest) nearest = d;
    }
    if (!nearest) return Probe::Unknown;
    Rat eps = sched.eps0;
    for (int j = 0; j < sched.steps; ++j) eps = eps / Rat(2);
    return *nearest < eps ? Probe::Confirmed : Probe::Unknown;
}

struct IsolationRadius {
    Rat radius;
    bool certified; // no omitted member can be closer than the radius
};

inline IsolationRadius isolation_radius(const SetExpr& e, const Rat& x, long long depth) {
    Enumeration en = enumerate(e, depth);
    if (!std::binary_search(en.points.begin(), en.points.end(), x))
        throw ValidationError("isolation_radius: point is not in the enumeration");
    std::optional<Rat> nearest;
    for (const auto& p : en.points) {
        if (p == x) continue;
        Rat d = abs(p - x);
        if (!nearest || d < *nearest) nearest = d;
    }
    auto od = omitted_distance(en.source, x, depth);
    Rat radius = nearest ? *nearest : (od && od->sign() > 0 ? *od : Rat(1));
    bool certified = !od || *od >= radius;
    if (od && od->is_zero()) certified = false;
    return IsolationRadius{radius, certified};
}

struct MinGap {
    Rat gap;
    bool certified; // equals the true infimum, not just the window minimum
};

namespace detail {

inline bool has_geom(const SetExpr& e) {
    if (e.is<Geom>()) return true;
    if (e.is<Union>()) {
        for (const auto& c : e.as<Union>().children)
            if (has_geom(c)) return true;
        return false;
    }
    if (e.is<MSum>()) {
        for (const auto& c : e.as<MSum>().children)
            if (has_geom(c)) return true;
        return false;
    }
    if (e.is<Affine>()) return has_geom(*e.as<Affine>().child);
    return false;
}

inline bool flat_points_only(const SetExpr& e) {
    if (e.is<Fin>() || e.is<Tail>()) return true;
    if (e.is<Union>()) {
        for (const auto& c : e.as<Union>().children)
            if (!c.is<Fin>() && !c.is<Tail>()) return false;
        return true;
    }
    return false;
}

} // namespace detail

inline MinGap distance_min(const SetExpr& e0, long long depth) {
    Enumeration en = enumerate(e0, depth);
    if (en.points.size() < 2) throw ValidationError("distance_min: needs at least two points");
    Rat best = en.points[1] - en.points[0];
    for (std::size_t i = 2; i < en.points.size(); ++i)
        best = std::min(best, en.points[i] - en.points[i - 1]);

    bool certified = false;
    const SetExpr& e = en.source;
    if (e.is<Fin>() || e.is<Tail>()) {
        certified = true; // complete, resp. constant-gap progression
    } else if (detail::flat_points_only(e)) {
        // Union of finite sets and same-direction tails: gaps repeat with
        // period lcm(steps), so a window two periods past the spread of the
        // starting points already contains the infimum.
        Rat period(1);
        std::optional<Rat> smin, smax;
        std::optional<bool> dir;
        bool shape_ok = true;
        for (const auto& c : e.as<Union>().children) {
            if (c.is<Fin>()) {
                for (const auto& p : c.as<Fin>().points) {
                    if (!smin || p < *smin) smin = p;
                    if (!smax || p > *smax) smax = p;
                }
                continue;
            }
            const auto& t = c.as<Tail>();
            if (dir && *dir != t.up) shape_ok = false;
            dir = t.up;
            period = period * t.step / rat_gcd(period, t.step); // lcm
            if (!smin || t.start < *smin) smin = t.start;
            if (!smax || t.start > *smax) smax = t.start;
        }
        if (shape_ok && dir) {
            Rat span = *smax - *smin;
            certified = true;
            for (const auto& c : e.as<Union>().children) {
                if (!c.is<Tail>()) continue;
                const auto& t = c.as<Tail>();
                if (t.step * Rat(depth - 1) < span + period * Rat(2)) certified = false;
            }
        }
    }
    return MinGap{best, certified};
}

} // namespace setline::oracle
