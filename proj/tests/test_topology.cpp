#include "doctest.h"

#include "setline/oracle.hpp"
#include "setline/topology.hpp"

using namespace setline;

namespace {
Rat r(long long n, long long d = 1) { return Rat(n, d); }

SetExpr geomc(long long den) { return geom(r(0), r(1), r(1, den), true); }
} // namespace

TEST_CASE("closure") {
    CHECK(expr_eq(closure(geom(r(0), r(1), r(1, 2), false)), geom(r(0), r(1), r(1, 2), true)));
    CHECK(expr_eq(closure(tail(r(0), r(1), true)), tail(r(0), r(1), true)));
    SetExpr e = normalize(msum_of({geom(r(0), r(1), r(1, 2), false), fin({r(0), r(1)})}));
    SetExpr c = closure(e);
    CHECK(expr_eq(closure(c), c));
    CHECK(all_limits_present(c));
}

TEST_CASE("accumulation points") {
    CHECK_FALSE(acc_points(fin({r(1), r(2), r(3)})).has_value());
    CHECK_FALSE(acc_points(tail(r(0), r(1), true)).has_value());

    auto a = acc_points(geom(r(7), r(2), r(1, 2), false));
    REQUIRE(a.has_value());
    CHECK(expr_eq(*a, fin({r(7)})));

    // sum of two convergent components accumulates on both closures
    SetExpr e = normalize(msum_of({geomc(2), geomc(3)}));
    auto ae = acc_points(e);
    REQUIRE(ae.has_value());
    CHECK(expr_eq(*ae, normalize(union_of({geomc(2), geomc(3)}))));

    // discrete sum: no accumulation anywhere
    SetExpr d = normalize(msum_of({fin({r(0), r(1, 2)}), tail(r(0), r(2), true)}));
    CHECK_FALSE(acc_points(d).has_value());

    // one tail child: limits accumulate along the translates
    SetExpr g = normalize(msum_of({geomc(2), tail(r(0), r(2), true)}));
    auto ag = acc_points(g);
    REQUIRE(ag.has_value());
    CHECK(expr_eq(*ag, tail(r(0), r(2), true)));
}

TEST_CASE("isolated points") {
    auto i1 = iso_points(geomc(2));
    REQUIRE(i1.has_value());
    CHECK(expr_eq(*i1, geom(r(0), r(1), r(1, 2), false)));

    auto i2 = iso_points(fin({r(5)}));
    REQUIRE(i2.has_value());
    CHECK(expr_eq(*i2, fin({r(5)})));

    auto i3 = iso_points(union_of({geom(r(0), r(1), r(1, 2), false), fin({r(0)})}));
    REQUIRE(i3.has_value());
    CHECK(expr_eq(*i3, geom(r(0), r(1), r(1, 2), false)));

    // every member of a closed geometric-with-limit union keeps partitioning
    SetExpr e = geomc(2);
    auto iso = iso_points(e);
    auto accs = acc_points(e);
    REQUIRE(iso.has_value());
    REQUIRE(accs.has_value());
    CHECK(sets_disjoint(*iso, *accs));
}

TEST_CASE("derived set of closed sets") {
    auto l1 = lpt_set(geomc(2));
    REQUIRE(l1.has_value());
    CHECK(expr_eq(*l1, fin({r(0)})));

    CHECK_FALSE(lpt_set(tail(r(0), r(1), true)).has_value());

    CHECK_THROWS_AS(lpt_set(geom(r(0), r(1), r(1, 2), false)), PreconditionError);

    // translated sums collapse to a single component
    SetExpr e = normalize(msum_of({geomc(2), geom(r(10), r(1), r(1, 2), true)}));
    auto l = lpt_set(e);
    REQUIRE(l.has_value());
    CHECK(expr_eq(*l, geom(r(10), r(1), r(1, 2), true)));
}

TEST_CASE("derivative chain and rank") {
    CHECK(rank(fin({r(0)})) == 1);
    CHECK(rank(geom(r(0), r(1), r(1, 2), false)) == 2);
    CHECK(rank(normalize(msum_of({geomc(2), geomc(3)}))) == 3);
    CHECK(rank(tail(r(0), r(1), true)) == 1);

    TopoFacts f = derivative_chain(geom(r(0), r(1), r(1, 2), false));
    REQUIRE(f.chain.size() == 2);
    CHECK(expr_eq(f.chain[0], geomc(2)));
    CHECK(expr_eq(f.chain[1], fin({r(0)})));
    CHECK_FALSE(f.closed);
    CHECK(f.discrete);
}

TEST_CASE("discreteness and closedness") {
    CHECK(is_discrete(geom(r(0), r(1), r(1, 2), false)));
    CHECK_FALSE(is_closed(geom(r(0), r(1), r(1, 2), false)));
    CHECK_FALSE(is_discrete(geomc(2)));
    CHECK(is_closed(geomc(2)));

    SetExpr d = normalize(msum_of({fin({r(0), r(1, 2)}), tail(r(0), r(2), true)}));
    CHECK(is_discrete(d));
    CHECK(is_closed(d));
    CHECK_FALSE(is_compact(d));

    // a sum hiding one open component is not closed; the engine refutes it
    SetExpr h = normalize(msum_of({geom(r(0), r(1), r(1, 2), false), geomc(3)}));
    CHECK_FALSE(is_closed(h));

    // sum with one tail child and a closed bounded child is closed
    SetExpr g = normalize(msum_of({geomc(2), tail(r(0), r(2), true)}));
    CHECK(is_closed(g));
    CHECK_FALSE(is_discrete(g));
}

TEST_CASE("derivative chain members strictly shrink") {
    std::vector<SetExpr> corpus = {
        normalize(msum_of({geomc(2), geomc(3)})),
        normalize(union_of({geomc(2), geom(r(7), r(1), r(1, 3), true), tail(r(20), r(1), true)})),
    };
    for (const auto& e : corpus) {
        TopoFacts f = derivative_chain(e);
        for (std::size_t i = 1; i < f.chain.size(); ++i) {
            // inclusion, sampled exactly; strictness via rank drop
            auto pts = oracle::enumerate(f.chain[i], 6).points;
            for (std::size_t p = 0; p < pts.size(); p += 3)
                CHECK(member(f.chain[i - 1], pts[p]));
            CHECK(rank(f.chain[i]) < rank(f.chain[i - 1]));
        }
    }
}

TEST_CASE("chain decomposition realizes the rank") {
    SetExpr e = geomc(2);
    auto pieces = chain_decompose(e);
    REQUIRE(pieces.size() == 2);
    CHECK(expr_eq(pieces[0], geom(r(0), r(1), r(1, 2), false)));
    CHECK(expr_eq(pieces[1], fin({r(0)})));
    for (const auto& p : pieces) CHECK(is_discrete(p));
}
