#include "doctest.h"

#include "setline/set_expr.hpp"

using namespace setline;

namespace {
Rat r(long long n, long long d = 1) { return Rat(n, d); }
} // namespace

TEST_CASE("affine folds into leaves") {
    SetExpr e = normalize(affine(fin({r(1), r(2)}), r(2), r(1)));
    CHECK(expr_eq(e, fin({r(3), r(5)})));

    SetExpr g = normalize(affine(geom(r(0), r(1), r(1, 2), true), r(3), r(1)));
    CHECK(expr_eq(g, geom(r(1), r(3), r(1, 2), true)));

    SetExpr t = normalize(affine(tail(r(0), r(1), true), r(-2), r(5)));
    CHECK(expr_eq(t, tail(r(5), r(2), false)));

    SetExpr nested = normalize(affine(affine(fin({r(1)}), r(2), r(0)), r(3), r(1)));
    CHECK(expr_eq(nested, fin({r(7)})));
}

TEST_CASE("union merges and deduplicates") {
    CHECK(expr_eq(normalize(union_of({fin({r(1)}), fin({r(1), r(2)})})), fin({r(1), r(2)})));

    // A finite point sitting at a geometric limit is absorbed into it.
    SetExpr u = normalize(union_of({geom(r(0), r(1), r(1, 2), false), fin({r(0)})}));
    CHECK(expr_eq(u, geom(r(0), r(1), r(1, 2), true)));

    // Identical geometric components merge; the limit is kept.
    SetExpr v = normalize(union_of({geom(r(0), r(1), r(1, 2), false), geom(r(0), r(1), r(1, 2), true)}));
    CHECK(expr_eq(v, geom(r(0), r(1), r(1, 2), true)));

    // A point that is already a member of a sibling leaf disappears.
    SetExpr w = normalize(union_of({fin({r(1, 4)}), geom(r(0), r(1), r(1, 2), false)}));
    CHECK(expr_eq(w, geom(r(0), r(1), r(1, 2), false)));

    SetExpr nested = normalize(union_of({fin({r(9)}), union_of({fin({r(1)}), fin({r(5)})})}));
    CHECK(expr_eq(nested, fin({r(1), r(5), r(9)})));
}

TEST_CASE("normalize is idempotent") {
    std::vector<SetExpr> samples = {
        affine(fin({r(1), r(2)}), r(2), r(1)),
        union_of({geom(r(0), r(1), r(1, 2), false), fin({r(0)}), tail(r(4), r(3), true)}),
        msum_of({geom(r(0), r(1), r(1, 2), true), fin({r(0), r(1)})}),
        msum_of({geom(r(0), r(1), r(1, 2), true), tail(r(0), r(2), true)}),
    };
    for (const auto& e : samples) {
        SetExpr n1 = normalize(e);
        SetExpr n2 = normalize(n1);
        CHECK(expr_eq(n1, n2));
    }
}

TEST_CASE("msum combines finite children") {
    SetExpr e = normalize(msum_of({fin({r(0), r(1)}), fin({r(0), r(10)})}));
    CHECK(expr_eq(e, fin({r(0), r(1), r(10), r(11)})));

    // Singleton finite child acts as a translation.
    SetExpr any = geom(r(0), r(1), r(1, 2), true);
    CHECK(expr_eq(normalize(msum_of({fin({r(0)}), any})), normalize(any)));
    CHECK(expr_eq(normalize(msum_of({fin({r(5)}), any})), geom(r(5), r(1), r(1, 2), true)));
}

TEST_CASE("msum validation") {
    CHECK_THROWS_AS(normalize(msum_of({tail(r(0), r(1), true), tail(r(0), r(1), true)})),
                    ValidationError);
    // The unbounded child must be a tail or union of tails.
    CHECK_THROWS_AS(
        normalize(msum_of({fin({r(0), r(1)}),
                           union_of({geom(r(0), r(1), r(1, 2), true), tail(r(0), r(1), true)})})),
        ValidationError);
    // One tail child is fine.
    CHECK_NOTHROW(normalize(msum_of({geom(r(0), r(1), r(1, 2), true), tail(r(0), r(2), true)})));
}

TEST_CASE("leaf validation errors") {
    CHECK_THROWS_AS(geom(r(0), r(1), r(3, 2), true), ValidationError);
    CHECK_THROWS_AS(geom(r(0), r(1), r(0), true), ValidationError);
    CHECK_THROWS_AS(geom(r(0), r(0), r(1, 2), true), ValidationError);
    CHECK_THROWS_AS(tail(r(0), r(0), true), ValidationError);
    CHECK_THROWS_AS(tail(r(0), r(-1), true), ValidationError);
    CHECK_THROWS_AS(fin({}), ValidationError);
    CHECK_THROWS_AS(affine(fin({r(1)}), r(0), r(0)), ValidationError);
}

TEST_CASE("bounds") {
    Bounds b = bounds(geom(r(0), r(1), r(-1, 2), true));
    REQUIRE(b.lo.has_value());
    REQUIRE(b.hi.has_value());
    CHECK(*b.lo == r(-1, 2));
    CHECK(*b.hi == r(1));

    Bounds t = bounds(tail(r(3), r(1), true));
    CHECK(*t.lo == r(3));
    CHECK_FALSE(t.hi.has_value());

    Bounds m = bounds(normalize(msum_of({fin({r(0), r(1)}), geom(r(0), r(1), r(1, 2), true)})));
    CHECK(*m.lo == r(0));
    CHECK(*m.hi == r(2));
    CHECK(is_bounded(fin({r(1)})));
    CHECK_FALSE(is_bounded(tail(r(0), r(1), false)));
}

TEST_CASE("cells expansion") {
    SetExpr e = normalize(msum_of({geom(r(0), r(1), r(1, 2), true), fin({r(0), r(1)})}));
    auto cs = cells(e);
    CHECK(cs.size() == 2);
    for (const auto& c : cs) CHECK(c.geoms.size() == 1);
}
