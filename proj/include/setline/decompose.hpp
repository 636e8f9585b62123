#pragma once

// Decomposition of linear images of products of compact sets into explicitly
// few discrete pieces, together with the computable bound on how many pieces
// are ever needed.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "setline/errors.hpp"
#include "setline/topology.hpp"

namespace setline {

// N_i means child i is a union of at most N_i + 1 discrete sets.
struct RankVector {
    std::vector<long long> N;
};

// K(N) = 1 when all N_i = 0, otherwise 1 + sum over i with N_i >= 1 of
// K(N with N_i decremented). Grows fast; computed exactly.
inline BigInt kbound(const RankVector& rv) {
    if (rv.N.empty()) throw ValidationError("kbound: empty rank vector");
    for (long long n : rv.N)
        if (n < 0) throw ValidationError("kbound: negative entry");
    static thread_local std::map<std::vector<long long>, BigInt> memo;
    struct Rec {
        std::map<std::vector<long long>, BigInt>& memo;
        BigInt operator()(std::vector<long long>& n) {
            auto it = memo.find(n);
            if (it != memo.end()) return it->second;
            BigInt k(1);
            for (std::size_t i = 0; i < n.size(); ++i) {
                if (n[i] == 0) continue;
                --n[i];
                k += (*this)(n);
                ++n[i];
            }
            memo[n] = k;
            return k;
        }
    } rec{memo};
    std::vector<long long> n = rv.N;
    return rec(n);
}

// Strict Minkowski-sum constructor: all children compact except at most one
// discrete closed unbounded tail part.
inline SetExpr minkowski_sum(const std::vector<SetExpr>& children) {
    if (children.empty()) throw ValidationError("minkowski_sum: no children");
    std::vector<SetExpr> norm;
    bool tail_seen = false;
    for (std::size_t i = 0; i < children.size(); ++i) {
        SetExpr c = normalize(children[i]);
        if (!is_bounded(c)) {
            if (!is_tailish(c))
                throw ValidationError("minkowski_sum: child #" + std::to_string(i + 1) +
                                      " is unbounded but not a tail or union of tails");
            if (tail_seen)
                throw ValidationError("minkowski_sum: child #" + std::to_string(i + 1) +
                                      " is a second unbounded child");
            tail_seen = true;
        } else if (!is_closed(c)) {
            throw ValidationError("minkowski_sum: child #" + std::to_string(i + 1) +
                                  " is not compact");
        }
        norm.push_back(std::move(c));
    }
    if (norm.size() == 1) return norm.front();
    return normalize(SetExpr{MSum{std::move(norm)}});
}

struct DecompositionPlan {
    std::vector<Rat> coeffs;
    std::vector<std::pair<std::string, SetExpr>> pieces; // label "Y", "X'1.Y", ...
    BigInt bound;                                        // K of the rank vector
    std::vector<long long> rank_vector;                  // N_i = rank(E_i) - 1
};

// The expression a plan decomposes: sum of b_i * E_i.
inline SetExpr linear_image_expr(const std::vector<SetExpr>& E, const std::vector<Rat>& b) {
    std::vector<SetExpr> scaled;
    for (std::size_t i = 0; i < E.size(); ++i) scaled.push_back(affine(E[i], b[i], Rat(0)));
    return detail::msum_expr(std::move(scaled));
}

inline BigInt kbound_for(const std::vector<SetExpr>& children) {
    std::vector<long long> rv;
    for (const auto& c : children) rv.push_back(static_cast<long long>(rank(c)) - 1);
    return kbound(RankVector{rv});
}

// Decompose v(E_1 x ... x E_m) with v = sum b_i x_i into discrete pieces.
// Follows the rank recursion: the all-isolated piece is discrete, and each
// child may be replaced by its derived set, strictly reducing rank.
inline DecompositionPlan linear_image_decompose(const std::vector<SetExpr>& E,
                                                const std::vector<Rat>& b) {
    if (E.empty() || E.size() != b.size())
        throw ValidationError("linear_image_decompose: need matching nonempty E and b");
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i].is_zero())
            throw ValidationError("linear_image_decompose: coefficient #" + std::to_string(i + 1) +
                                  " is zero");
    std::vector<SetExpr> cur;
    std::vector<long long> rv;
    for (std::size_t i = 0; i < E.size(); ++i) {
        SetExpr c = normalize(E[i]);
        if (!is_bounded(c) || !is_closed(c))
            throw PreconditionError("linear_image_decompose: child #" + std::to_string(i + 1) +
                                    " is not compact (use tail_combine for tails)");
        rv.push_back(static_cast<long long>(rank(c)) - 1);
        cur.push_back(std::move(c));
    }

    DecompositionPlan plan;
    plan.coeffs = b;
    plan.rank_vector = rv;
    plan.bound = kbound(RankVector{rv});

    struct Rec {
        const std::vector<Rat>& b;
        std::vector<std::pair<std::string, SetExpr>>& pieces;
        void operator()(const std::vector<SetExpr>& sets, const std::string& prefix) {
            std::vector<SetExpr> summands;
            for (std::size_t i = 0; i < sets.size(); ++i) {
                auto iso = iso_points(sets[i]);
                if (!iso) throw std::logic_error("closed nonempty set without isolated points");
                summands.push_back(normalize(affine(std::move(*iso), b[i], Rat(0))));
            }
            SetExpr y_naive = detail::msum_expr(std::move(summands));

            // A sum of isolated coordinates can still land on a value that a
            // limit-using representation accumulates on. Those members lie in
            // the derived images, so cutting them out keeps the cover while
            // making the piece genuinely discrete.
            std::vector<SetExpr> derived_images;
            std::vector<std::pair<std::size_t, SetExpr>> recursions;
            for (std::size_t i = 0; i < sets.size(); ++i) {
                auto derived = acc_points(sets[i]);
                if (!derived) continue;
                std::vector<SetExpr> next = sets;
                next[i] = *derived;
                derived_images.push_back(linear_image_expr(next, b));
                recursions.emplace_back(i, std::move(*derived));
            }
            std::optional<SetExpr> y = y_naive;
            if (!derived_images.empty())
                y = subtract_members(y_naive, detail::union_expr(std::move(derived_images)));
            if (y) pieces.emplace_back(prefix + "Y", std::move(*y));

            for (auto& [i, derived] : recursions) {
                std::vector<SetExpr> next = sets;
                next[i] = std::move(derived);
                (*this)(next, prefix + "X'" + std::to_string(i + 1) + ".");
            }
        }
    } rec{b, plan.pieces};
    rec(cur, "");

    if (BigInt(static_cast<long long>(plan.pieces.size())) > plan.bound)
        throw std::logic_error("decomposition exceeded its own bound");
    return plan;
}

} // namespace setline
