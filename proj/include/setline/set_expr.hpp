#pragma once

// Symbolic descriptions of structured countable subsets of the real line.
//
// An expression denotes a nonempty set of rationals; the empty set is always
// an absent optional, never a node. Normal form: no Affine nodes (folded into
// leaves), unions flattened with merged Fin leaves, Minkowski sums flattened
// with combined Fin children, children in canonical order.

#include <algorithm>
#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "setline/errors.hpp"
#include "setline/rational.hpp"

namespace setline {

// Value-semantic heap box so variant alternatives can hold the recursive type.
template <class T>
class box {
public:
    box(T v) : p_(std::make_unique<T>(std::move(v))) {}
    box(const box& o) : p_(std::make_unique<T>(*o.p_)) {}
    box(box&&) noexcept = default;
    box& operator=(const box& o) {
        p_ = std::make_unique<T>(*o.p_);
        return *this;
    }
    box& operator=(box&&) noexcept = default;
    T& operator*() { return *p_; }
    const T& operator*() const { return *p_; }
    T* operator->() { return p_.get(); }
    const T* operator->() const { return p_.get(); }

private:
    std::unique_ptr<T> p_;
};

struct SetExpr;

// Finite set; points strictly increasing.
struct Fin {
    std::vector<Rat> points;
};

// {limit + scale * ratio^k : k >= 0}, plus {limit} when with_limit.
struct Geom {
    Rat limit, scale, ratio;
    bool with_limit = true;
};

// {start + k*step : k in N} (up) or {start - k*step : k in N} (down).
struct Tail {
    Rat start, step;
    bool up = true;
};

// scale * child + offset; eliminated by normalization.
struct Affine {
    box<SetExpr> child;
    Rat scale, offset;
};

struct Union {
    std::vector<SetExpr> children;
};

// Minkowski sum {x1 + ... + xm : xi in child i}.
struct MSum {
    std::vector<SetExpr> children;
};

struct SetExpr {
    std::variant<Fin, Geom, Tail, Affine, Union, MSum> node;

    template <class T>
    bool is() const { return std::holds_alternative<T>(node); }
    template <class T>
    const T& as() const { return std::get<T>(node); }
    template <class T>
    T& as() { return std::get<T>(node); }
    std::size_t kind() const { return node.index(); }
};

inline SetExpr fin(std::vector<Rat> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) throw ValidationError("fin: needs at least one point");
    return SetExpr{Fin{std::move(pts)}};
}

inline SetExpr geom(Rat limit, Rat scale, Rat ratio, bool with_limit) {
    if (scale.is_zero()) throw ValidationError("geom: scale must be nonzero");
    if (abs(ratio) >= Rat(1) || ratio.is_zero())
        throw ValidationError("geom: ratio must satisfy 0 < |ratio| < 1");
    return SetExpr{Geom{std::move(limit), std::move(scale), std::move(ratio), with_limit}};
}

inline SetExpr tail(Rat start, Rat step, bool up) {
    if (step.sign() <= 0) throw ValidationError("tail: step must be positive");
    return SetExpr{Tail{std::move(start), std::move(step), up}};
}

inline SetExpr affine(SetExpr child, Rat scale, Rat offset) {
    if (scale.is_zero()) throw ValidationError("affine: scale must be nonzero");
    return SetExpr{Affine{box<SetExpr>(std::move(child)), std::move(scale), std::move(offset)}};
}

inline SetExpr union_of(std::vector<SetExpr> children) {
    if (children.size() < 2) throw ValidationError("union: needs at least two children");
    return SetExpr{Union{std::move(children)}};
}

inline SetExpr msum_of(std::vector<SetExpr> children) {
    if (children.size() < 2) throw ValidationError("msum: needs at least two children");
    return SetExpr{MSum{std::move(children)}};
}

// ---------------------------------------------------------------------------
// Ordering (canonical child order, deduplication, deterministic output)

std::strong_ordering cmp(const SetExpr& a, const SetExpr& b);

inline std::strong_ordering cmp(const Rat& a, const Rat& b) { return a <=> b; }

inline std::strong_ordering cmp_vec(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    return a.size() <=> b.size();
}

inline std::strong_ordering cmp_children(const std::vector<SetExpr>& a, const std::vector<SetExpr>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = cmp(a[i], b[i]); c != 0) return c;
    return a.size() <=> b.size();
}

inline std::strong_ordering cmp(const SetExpr& a, const SetExpr& b) {
    if (a.kind() != b.kind()) return a.kind() <=> b.kind();
    if (a.is<Fin>()) return cmp_vec(a.as<Fin>().points, b.as<Fin>().points);
    if (a.is<Geom>()) {
        const auto &x = a.as<Geom>(), &y = b.as<Geom>();
        if (auto c = x.limit <=> y.limit; c != 0) return c;
        if (auto c = x.scale <=> y.scale; c != 0) return c;
        if (auto c = x.ratio <=> y.ratio; c != 0) return c;
        return static_cast<int>(x.with_limit) <=> static_cast<int>(y.with_limit);
    }
    if (a.is<Tail>()) {
        const auto &x = a.as<Tail>(), &y = b.as<Tail>();
        if (auto c = x.start <=> y.start; c != 0) return c;
        if (auto c = x.step <=> y.step; c != 0) return c;
        return static_cast<int>(x.up) <=> static_cast<int>(y.up);
    }
    if (a.is<Affine>()) {
        const auto &x = a.as<Affine>(), &y = b.as<Affine>();
        if (auto c = x.scale <=> y.scale; c != 0) return c;
        if (auto c = x.offset <=> y.offset; c != 0) return c;
        return cmp(*x.child, *y.child);
    }
    if (a.is<Union>()) return cmp_children(a.as<Union>().children, b.as<Union>().children);
    return cmp_children(a.as<MSum>().children, b.as<MSum>().children);
}

inline bool expr_eq(const SetExpr& a, const SetExpr& b) { return cmp(a, b) == 0; }

// ---------------------------------------------------------------------------
// Structural bounds

struct Bounds {
    std::optional<Rat> lo, hi; // nullopt = unbounded on that side
};

inline Bounds bounds(const SetExpr& e) {
    if (e.is<Fin>()) {
        const auto& f = e.as<Fin>();
        return {f.points.front(), f.points.back()};
    }
    if (e.is<Geom>()) {
        const auto& g = e.as<Geom>();
        Rat t0 = g.limit + g.scale;
        Rat t1 = g.limit + g.scale * g.ratio;
        Rat lo = std::min({g.limit, t0, t1});
        Rat hi = std::max({g.limit, t0, t1});
        return {lo, hi};
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        if (t.up) return {t.start, std::nullopt};
        return {std::nullopt, t.start};
    }
    if (e.is<Affine>()) {
        const auto& a = e.as<Affine>();
        Bounds c = bounds(*a.child);
        auto tf = [&](const std::optional<Rat>& v) -> std::optional<Rat> {
            if (!v) return std::nullopt;
            return a.scale * *v + a.offset;
        };
        if (a.scale.sign() > 0) return {tf(c.lo), tf(c.hi)};
        return {tf(c.hi), tf(c.lo)};
    }
    if (e.is<Union>()) {
        Bounds r = bounds(e.as<Union>().children.front());
        for (std::size_t i = 1; i < e.as<Union>().children.size(); ++i) {
            Bounds c = bounds(e.as<Union>().children[i]);
            if (!c.lo || (r.lo && *c.lo < *r.lo)) r.lo = c.lo;
            if (!c.hi || (r.hi && *c.hi > *r.hi)) r.hi = c.hi;
        }
        return r;
    }
    Bounds r{Rat(0), Rat(0)};
    for (const auto& c : e.as<MSum>().children) {
        Bounds b = bounds(c);
        if (r.lo && b.lo) *r.lo += *b.lo; else r.lo.reset();
        if (r.hi && b.hi) *r.hi += *b.hi; else r.hi.reset();
    }
    return r;
}

inline bool is_bounded(const SetExpr& e) {
    Bounds b = bounds(e);
    return b.lo.has_value() && b.hi.has_value();
}

// Tail, or a union of tails and finite sets: closed, discrete, positive
// minimum gap. The only shape allowed as the unbounded child of a sum.
inline bool is_tailish(const SetExpr& e) {
    if (e.is<Tail>()) return true;
    if (!e.is<Union>()) return false;
    bool has_tail = false;
    for (const auto& c : e.as<Union>().children) {
        if (c.is<Tail>()) has_tail = true;
        else if (!c.is<Fin>()) return false;
    }
    return has_tail;
}

// ---------------------------------------------------------------------------
// Membership in leaf nodes (used by normalization; no search machinery)

inline bool leaf_member(const SetExpr& e, const Rat& x) {
    if (e.is<Fin>()) {
        const auto& p = e.as<Fin>().points;
        return std::binary_search(p.begin(), p.end(), x);
    }
    if (e.is<Geom>()) {
        const auto& g = e.as<Geom>();
        if (x == g.limit) return g.with_limit;
        Rat t = (x - g.limit) / g.scale;
        if (t.sign() <= 0 && g.ratio.sign() > 0) return false;
        Rat p(1);
        while (abs(p) > abs(t)) p *= g.ratio;
        return p == t;
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        Rat k = t.up ? (x - t.start) / t.step : (t.start - x) / t.step;
        return k.is_integer() && k.sign() >= 0;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Normalization

namespace detail {

SetExpr norm(const SetExpr& e, const Rat& scale, const Rat& offset);

inline void flatten_union(std::vector<SetExpr>& out, SetExpr e) {
    if (e.is<Union>()) {
        for (auto& c : e.as<Union>().children) flatten_union(out, std::move(c));
    } else {
        out.push_back(std::move(e));
    }
}

inline SetExpr assemble_union(std::vector<SetExpr> parts) {
    std::vector<SetExpr> flat;
    for (auto& p : parts) flatten_union(flat, std::move(p));

    std::vector<Rat> pool;
    std::vector<SetExpr> rest;
    for (auto& c : flat) {
        if (c.is<Fin>()) {
            for (auto& p : c.as<Fin>().points) pool.push_back(p);
        } else {
            rest.push_back(std::move(c));
        }
    }

    // Merge identical geometric components (exact parameter comparison);
    // a component present both with and without its limit keeps it.
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (!rest[i].is<Geom>()) continue;
        for (std::size_t j = rest.size(); j-- > i + 1;) {
            if (!rest[j].is<Geom>()) continue;
            auto &a = rest[i].as<Geom>(), &b = rest[j].as<Geom>();
            if (a.limit == b.limit && a.scale == b.scale && a.ratio == b.ratio) {
                a.with_limit = a.with_limit || b.with_limit;
                rest.erase(rest.begin() + j);
            }
        }
    }

    // A pooled point that is a geometric limit turns with_limit on; a point
    // already denoted by a sibling leaf is dropped.
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::vector<Rat> kept;
    for (const auto& p : pool) {
        bool absorbed = false;
        for (auto& c : rest) {
            if (c.is<Geom>() && c.as<Geom>().limit == p) {
                c.as<Geom>().with_limit = true;
                absorbed = true;
                break;
            }
            if ((c.is<Geom>() || c.is<Tail>()) && leaf_member(c, p)) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) kept.push_back(p);
    }

    // A limitless geometric component whose limit a sibling leaf already
    // denotes gains with_limit (same denoted union, tighter form).
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (!rest[i].is<Geom>() || rest[i].as<Geom>().with_limit) continue;
        const Rat& c = rest[i].as<Geom>().limit;
        bool covered = std::binary_search(kept.begin(), kept.end(), c);
        for (std::size_t j = 0; !covered && j < rest.size(); ++j)
            if (j != i && (rest[j].is<Geom>() || rest[j].is<Tail>()) && leaf_member(rest[j], c))
                covered = true;
        if (covered) rest[i].as<Geom>().with_limit = true;
    }

    if (!kept.empty()) rest.push_back(SetExpr{Fin{std::move(kept)}});

    std::sort(rest.begin(), rest.end(), [](const SetExpr& a, const SetExpr& b) { return cmp(a, b) < 0; });
    rest.erase(std::unique(rest.begin(), rest.end(), expr_eq), rest.end());

    if (rest.size() == 1) return std::move(rest.front());
    return SetExpr{Union{std::move(rest)}};
}

inline void flatten_msum(std::vector<SetExpr>& out, SetExpr e) {
    if (e.is<MSum>()) {
        for (auto& c : e.as<MSum>().children) flatten_msum(out, std::move(c));
    } else {
        out.push_back(std::move(e));
    }
}

inline SetExpr assemble_msum(std::vector<SetExpr> parts) {
    std::vector<SetExpr> flat;
    for (auto& p : parts) flatten_msum(flat, std::move(p));

    // Combine all finite children into one finite child.
    std::vector<Rat> finpts{Rat(0)};
    std::vector<SetExpr> rest;
    bool saw_fin = false;
    for (auto& c : flat) {
        if (c.is<Fin>()) {
            saw_fin = true;
            std::vector<Rat> next;
            next.reserve(finpts.size() * c.as<Fin>().points.size());
            for (const auto& a : finpts)
                for (const auto& b : c.as<Fin>().points) next.push_back(a + b);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            if (next.size() > 4096) throw UnsupportedError("msum: finite part too large to combine");
            finpts = std::move(next);
        } else {
            rest.push_back(std::move(c));
        }
    }

    if (rest.empty()) return SetExpr{Fin{std::move(finpts)}};

    if (saw_fin && finpts.size() == 1) {
        // Pure translation: fold into the first remaining child.
        if (!finpts.front().is_zero()) rest.front() = norm(rest.front(), Rat(1), finpts.front());
        saw_fin = false;
    }

    int unbounded = 0;
    std::size_t unb_index = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (!is_bounded(rest[i])) {
            ++unbounded;
            unb_index = i;
        }
    }
    if (unbounded > 1)
        throw ValidationError("msum: at most one child may be unbounded");
    if (unbounded == 1 && !is_tailish(rest[unb_index]))
        throw ValidationError("msum: unbounded child #" + std::to_string(unb_index + 1) +
                              " must be a tail or a union of tails and finite sets");

    if (saw_fin) rest.push_back(SetExpr{Fin{std::move(finpts)}});
    if (rest.size() == 1) return std::move(rest.front());
    std::sort(rest.begin(), rest.end(), [](const SetExpr& a, const SetExpr& b) { return cmp(a, b) < 0; });
    return SetExpr{MSum{std::move(rest)}};
}

inline SetExpr norm(const SetExpr& e, const Rat& scale, const Rat& offset) {
    if (e.is<Fin>()) {
        std::vector<Rat> pts;
        pts.reserve(e.as<Fin>().points.size());
        for (const auto& p : e.as<Fin>().points) pts.push_back(scale * p + offset);
        return fin(std::move(pts));
    }
    if (e.is<Geom>()) {
        const auto& g = e.as<Geom>();
        return geom(scale * g.limit + offset, scale * g.scale, g.ratio, g.with_limit);
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        bool up = scale.sign() > 0 ? t.up : !t.up;
        return tail(scale * t.start + offset, abs(scale) * t.step, up);
    }
    if (e.is<Affine>()) {
        const auto& a = e.as<Affine>();
        if (a.scale.is_zero()) throw ValidationError("affine: scale must be nonzero");
        return norm(*a.child, scale * a.scale, scale * a.offset + offset);
    }
    if (e.is<Union>()) {
        const auto& u = e.as<Union>();
        if (u.children.size() < 2) throw ValidationError("union: needs at least two children");
        std::vector<SetExpr> kids;
        kids.reserve(u.children.size());
        for (const auto& c : u.children) kids.push_back(norm(c, scale, offset));
        return assemble_union(std::move(kids));
    }
    const auto& m = e.as<MSum>();
    if (m.children.size() < 2) throw ValidationError("msum: needs at least two children");
    std::vector<SetExpr> kids;
    kids.reserve(m.children.size());
    for (std::size_t i = 0; i < m.children.size(); ++i)
        kids.push_back(norm(m.children[i], scale, i == 0 ? offset : Rat(0)));
    return assemble_msum(std::move(kids));
}

} // namespace detail

inline SetExpr normalize(const SetExpr& e) { return detail::norm(e, Rat(1), Rat(0)); }

// ---------------------------------------------------------------------------
// Engine form: an expression flattened to a union of sum cells.
// A cell denotes base + sum of geometric parts + sum of tail parts.

struct CellGeom {
    Rat scale, ratio; // value set {scale * ratio^k : k >= 0}, plus {0} when with_limit
    bool with_limit;
};

struct CellTail {
    Rat step; // value set {step * l : l >= 0} (up) or {-step * l : l >= 0}
    bool up;
};

struct Cell {
    Rat base;
    std::vector<CellGeom> geoms;
    std::vector<CellTail> tails;
};

namespace detail {

inline void cells_rec(const SetExpr& e, std::vector<Cell>& out) {
    if (e.is<Fin>()) {
        for (const auto& p : e.as<Fin>().points) out.push_back(Cell{p, {}, {}});
        return;
    }
    if (e.is<Geom>()) {
        const auto& g = e.as<Geom>();
        out.push_back(Cell{g.limit, {CellGeom{g.scale, g.ratio, g.with_limit}}, {}});
        return;
    }
    if (e.is<Tail>()) {
        const auto& t = e.as<Tail>();
        out.push_back(Cell{t.start, {}, {CellTail{t.step, t.up}}});
        return;
    }
    if (e.is<Union>()) {
        for (const auto& c : e.as<Union>().children) cells_rec(c, out);
        return;
    }
    if (e.is<MSum>()) {
        std::vector<Cell> acc{Cell{Rat(0), {}, {}}};
        for (const auto& c : e.as<MSum>().children) {
            std::vector<Cell> child;
            cells_rec(c, child);
            std::vector<Cell> next;
            next.reserve(acc.size() * child.size());
            for (const auto& a : acc)
                for (const auto& b : child) {
                    Cell merged = a;
                    merged.base += b.base;
                    merged.geoms.insert(merged.geoms.end(), b.geoms.begin(), b.geoms.end());
                    merged.tails.insert(merged.tails.end(), b.tails.begin(), b.tails.end());
                    next.push_back(std::move(merged));
                }
            if (next.size() > 100000) throw UnsupportedError("expression expands to too many cells");
            acc = std::move(next);
        }
        for (auto& c : acc) out.push_back(std::move(c));
        return;
    }
    cells_rec(normalize(e), out); // Affine: fold first
}

} // namespace detail

inline std::vector<Cell> cells(const SetExpr& e) {
    std::vector<Cell> out;
    detail::cells_rec(e, out);
    return out;
}

} // namespace setline
