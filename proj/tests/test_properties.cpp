#include "doctest.h"

#include "gen_util.hpp"
#include "setline/decompose.hpp"
#include "setline/oracle.hpp"
#include "setline/render.hpp"
#include "setline/topology.hpp"

using namespace setline;

namespace {
Rat r(long long n, long long d = 1) { return Rat(n, d); }

bool opt_expr_eq(const std::optional<SetExpr>& a, const std::optional<SetExpr>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || expr_eq(*a, *b);
}

// A member of e outside its accumulation set must show up in some finite
// enumeration (finite rank guarantees one exists).
bool has_isolated_member(const SetExpr& e) {
    auto a = acc_points(e);
    if (!a) return true;
    for (long long depth : {8, 16, 32}) {
        auto en = oracle::enumerate(e, depth);
        for (const auto& p : en.points)
            if (!member(*a, p)) return true;
    }
    return false;
}
} // namespace

TEST_CASE("derivative distributes over unions of closed sets") {
    testgen::ExprGen gen(11);
    for (int i = 0; i < 150; ++i) {
        SetExpr a = gen.gen_normalized(1, true, true);
        SetExpr b = gen.gen_normalized(1, true, true);
        SetExpr u = normalize(SetExpr{Union{{a, b}}});
        auto du = acc_points(u);
        auto da = acc_points(a);
        auto db = acc_points(b);
        std::optional<SetExpr> expected;
        if (da && db) expected = normalize(SetExpr{Union{{*da, *db}}});
        else if (da) expected = da;
        else if (db) expected = db;
        CAPTURE(render(u));
        CHECK(opt_expr_eq(du, expected));
    }
}

TEST_CASE("rank of a union of closed sets is the max of the ranks") {
    testgen::ExprGen gen(12);
    for (int i = 0; i < 150; ++i) {
        SetExpr a = gen.gen_normalized(1, true, true);
        SetExpr b = gen.gen_normalized(1, true, true);
        SetExpr u = normalize(SetExpr{Union{{a, b}}});
        CAPTURE(render(a));
        CAPTURE(render(b));
        CHECK(rank(u) == std::max(rank(a), rank(b)));
    }
}

TEST_CASE("affine equivariance of accumulation sets and rank") {
    testgen::ExprGen gen(13);
    for (int i = 0; i < 150; ++i) {
        SetExpr x = gen.gen_normalized(1, false, true);
        Rat alpha = gen.nonzero_rat();
        Rat beta = gen.small_rat();
        SetExpr mapped = normalize(affine(x, alpha, beta));
        auto am = acc_points(mapped);
        auto ax = acc_points(x);
        std::optional<SetExpr> expected;
        if (ax) expected = normalize(affine(*ax, alpha, beta));
        CAPTURE(render(x));
        CHECK(opt_expr_eq(am, expected));
        CHECK(rank(mapped) == rank(x));
    }
}

TEST_CASE("every nonempty expression has an isolated point") {
    testgen::ExprGen gen(14);
    for (int i = 0; i < 100; ++i) {
        SetExpr e = gen.gen_normalized(1, false, true);
        CAPTURE(render(e));
        CHECK(has_isolated_member(e));
    }
}

TEST_CASE("subsets of interval restrictions need no more discrete pieces") {
    // decomposition of a closed expression; finite restrictions reuse it
    std::vector<SetExpr> corpus = {
        geom(r(0), r(1), r(1, 2), true),
        normalize(union_of({geom(r(0), r(1), r(1, 2), true), geom(r(5), r(-1), r(1, 3), true)})),
        normalize(union_of({tail(r(0), r(1), true), fin({r(-3), r(-7, 2)})})),
    };
    testgen::ExprGen gen(15);
    for (const auto& e : corpus) {
        auto pieces = chain_decompose(e);
        auto en = oracle::enumerate(e, 12);
        for (int trial = 0; trial < 5; ++trial) {
            Rat lo = en.points[gen.rng.below(en.points.size())];
            Rat hi = en.points[gen.rng.below(en.points.size())];
            if (hi < lo) std::swap(lo, hi);
            std::size_t used_bound = 0;
            for (const auto& p : en.points) {
                if (p < lo || p > hi) continue;
                bool in_piece = false;
                for (const auto& piece : pieces)
                    if (member(piece, p)) { in_piece = true; break; }
                CHECK(in_piece);
                ++used_bound;
            }
            CHECK(pieces.size() <= static_cast<std::size_t>(rank(e)));
            (void)used_bound;
        }
    }
}

TEST_CASE("rank is the least piece count the chain decomposition realizes") {
    std::vector<SetExpr> corpus = {
        fin({r(0), r(3)}),
        geom(r(0), r(1), r(1, 2), true),
        normalize(union_of({geom(r(0), r(1), r(1, 2), true), fin({r(17)})})),
        normalize(union_of({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(3), r(1, 3), true)})),
    };
    for (const auto& e : corpus) {
        auto pieces = chain_decompose(e);
        CHECK(pieces.size() == rank(e));
        for (const auto& p : pieces) CHECK(is_discrete(p));
    }
    // decomposition plans never beat the rank
    auto plan = linear_image_decompose({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(1), r(1, 3), true)},
                                       {r(1), r(1)});
    SetExpr image = linear_image_expr({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(1), r(1, 3), true)},
                                      {r(1), r(1)});
    CHECK(rank(image) <= plan.pieces.size());
}
