#include "doctest.h"

#include "setline/oracle.hpp"
#include "setline/topology.hpp"

using namespace setline;

namespace {
Rat r(long long n, long long d = 1) { return Rat(n, d); }
} // namespace

TEST_CASE("enumeration with exact tail bounds") {
    auto en = oracle::enumerate(geom(r(0), r(1), r(1, 2), true), 3);
    CHECK(en.points == std::vector<Rat>{r(0), r(1, 4), r(1, 2), r(1)});
    REQUIRE(en.tail_bound.has_value());
    CHECK(*en.tail_bound == r(1, 8));

    auto ef = oracle::enumerate(fin({r(1), r(2)}), 50);
    CHECK(ef.points == std::vector<Rat>{r(1), r(2)});
    CHECK(*ef.tail_bound == r(0));

    auto em = oracle::enumerate(normalize(msum_of({fin({r(0), r(1)}), fin({r(0), r(10)})})), 1);
    CHECK(em.points == std::vector<Rat>{r(0), r(1), r(10), r(11)});
    CHECK(*em.tail_bound == r(0));

    auto et = oracle::enumerate(tail(r(0), r(2), true), 4);
    CHECK(et.points == std::vector<Rat>{r(0), r(2), r(4), r(6)});
    CHECK_FALSE(et.tail_bound.has_value());
}

TEST_CASE("monotonicity of enumeration") {
    SetExpr e = normalize(msum_of({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(1), r(1, 3), true)}));
    auto small = oracle::enumerate(e, 6);
    auto large = oracle::enumerate(e, 12);
    for (const auto& p : small.points)
        CHECK(std::binary_search(large.points.begin(), large.points.end(), p));
}

TEST_CASE("accumulation probe") {
    SetExpr g = geom(r(0), r(1), r(1, 2), true);
    CHECK(oracle::accumulation_probe(g, r(0), 20, {r(1), 10}) == oracle::Probe::Confirmed);
    CHECK(oracle::accumulation_probe(fin({r(1), r(2)}), r(1), 5, {r(1), 10}) == oracle::Probe::Unknown);

    SetExpr e = normalize(msum_of({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(1), r(1, 3), true)}));
    CHECK(oracle::accumulation_probe(e, r(1, 2), 30, {r(1), 12}) == oracle::Probe::Confirmed);
}

TEST_CASE("isolation radius") {
    auto i0 = oracle::isolation_radius(fin({r(0), r(1)}), r(0), 5);
    CHECK(i0.radius == r(1));
    CHECK(i0.certified);

    auto i1 = oracle::isolation_radius(geom(r(0), r(1), r(1, 2), true), r(1, 4), 10);
    CHECK(i1.radius == r(1, 8));
    CHECK(i1.certified);

    auto i2 = oracle::isolation_radius(geom(r(0), r(1), r(1, 2), true), r(0), 10);
    CHECK_FALSE(i2.certified);

    CHECK_THROWS_AS(oracle::isolation_radius(fin({r(0)}), r(7), 5), ValidationError);
}

TEST_CASE("minimum gap") {
    auto m0 = oracle::distance_min(tail(r(0), r(2), true), 10);
    CHECK(m0.gap == r(2));
    CHECK(m0.certified);

    auto m1 = oracle::distance_min(fin({r(0), r(1, 2), r(10)}), 5);
    CHECK(m1.gap == r(1, 2));
    CHECK(m1.certified);

    // deepest enumerated term at depth D is scale*ratio^(D-1)
    auto m2 = oracle::distance_min(geom(r(0), r(1), r(1, 2), true), 10);
    CHECK(m2.gap == pow(r(1, 2), 9));
    CHECK_FALSE(m2.certified);

    auto m3 = oracle::distance_min(normalize(union_of({tail(r(0), r(2), true), tail(r(1, 3), r(2), true)})), 30);
    CHECK(m3.gap == r(1, 3));
    CHECK(m3.certified);

    CHECK_THROWS_AS(oracle::distance_min(fin({r(1)}), 10), ValidationError);
}

TEST_CASE("oracle agrees with symbolic accumulation points on samples") {
    std::vector<SetExpr> corpus = {
        geom(r(0), r(1), r(1, 2), true),
        normalize(msum_of({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(1), r(1, 3), true)})),
        normalize(union_of({geom(r(5), r(-2), r(2, 3), true), fin({r(0)})})),
        normalize(msum_of({geom(r(0), r(1), r(1, 2), true), tail(r(0), r(2), true)})),
    };
    for (const auto& e : corpus) {
        auto a = acc_points(e);
        if (!a) continue;
        auto pts = oracle::enumerate(*a, 6).points;
        std::size_t checked = 0;
        for (const auto& p : pts) {
            if (checked++ > 12) break;
            CHECK(oracle::accumulation_probe(e, p, 40, {r(1), 12}) == oracle::Probe::Confirmed);
        }
    }
}
