#include "doctest.h"

#include "setline/decompose.hpp"
#include "setline/oracle.hpp"

using namespace setline;

namespace {
Rat r(long long n, long long d = 1) { return Rat(n, d); }
SetExpr geomc(long long den) { return geom(r(0), r(1), r(1, den), true); }
} // namespace

TEST_CASE("kbound values") {
    CHECK(kbound(RankVector{{0}}) == BigInt(1));
    CHECK(kbound(RankVector{{1}}) == BigInt(2));
    CHECK(kbound(RankVector{{1, 1}}) == BigInt(5));
    CHECK(kbound(RankVector{{0, 1}}) == BigInt(2));
    CHECK(kbound(RankVector{{2}}) == BigInt(3));
    CHECK(kbound(RankVector{{0, 0, 0}}) == BigInt(1));
    CHECK_THROWS_AS(kbound(RankVector{{}}), ValidationError);
    CHECK_THROWS_AS(kbound(RankVector{{-1}}), ValidationError);
}

TEST_CASE("kbound is strictly monotone in every entry") {
    std::vector<std::vector<long long>> vectors = {{0}, {1}, {2}, {0, 1}, {1, 1}, {2, 1}, {1, 1, 1}};
    for (const auto& n : vectors) {
        BigInt base = kbound(RankVector{n});
        for (std::size_t i = 0; i < n.size(); ++i) {
            auto up = n;
            ++up[i];
            CHECK(kbound(RankVector{up}) > base);
        }
    }
}

TEST_CASE("minkowski_sum") {
    SetExpr any = geomc(2);
    CHECK(expr_eq(minkowski_sum({fin({r(0)}), any}), normalize(any)));
    CHECK(expr_eq(minkowski_sum({fin({r(0), r(1)}), fin({r(0), r(10)})}),
                  fin({r(0), r(1), r(10), r(11)})));
    CHECK_NOTHROW(minkowski_sum({geomc(2), tail(r(0), r(2), true)}));
    CHECK_THROWS_AS(minkowski_sum({geom(r(0), r(1), r(1, 2), false), fin({r(0), r(1)})}),
                    ValidationError);
    CHECK_THROWS_AS(minkowski_sum({tail(r(0), r(1), true), tail(r(0), r(1), true)}),
                    ValidationError);
}

TEST_CASE("decomposition of finite products") {
    auto plan = linear_image_decompose({fin({r(0), r(1)}), fin({r(0), r(10)})}, {r(1), r(1)});
    CHECK(plan.bound == BigInt(1));
    REQUIRE(plan.pieces.size() == 1);
    CHECK(plan.pieces[0].first == "Y");
    CHECK(expr_eq(plan.pieces[0].second, fin({r(0), r(1), r(10), r(11)})));
    CHECK(is_discrete(plan.pieces[0].second));
}

TEST_CASE("decomposition with one convergent child") {
    auto plan = linear_image_decompose({geomc(2), fin({r(0), r(1)})}, {r(1), r(1)});
    CHECK(plan.bound == BigInt(2));
    REQUIRE(plan.pieces.size() == 2);
    CHECK(plan.pieces[0].first == "Y");
    CHECK(plan.pieces[1].first == "X'1.Y");
    CHECK(expr_eq(plan.pieces[1].second, fin({r(0), r(1)})));
    // 2^0 + 0 = 1 is accumulated by 1 + 2^-k, so it moves from the isolated
    // piece to the derived one; the isolated piece stays genuinely discrete.
    CHECK(expr_eq(plan.pieces[0].second,
                  normalize(union_of({geom(r(0), r(1, 2), r(1, 2), false),
                                      geom(r(1), r(1), r(1, 2), false)}))));
    for (const auto& [label, piece] : plan.pieces) CHECK(is_discrete(piece));

    // the pieces still cover the image exactly
    SetExpr image = linear_image_expr({geomc(2), fin({r(0), r(1)})}, {r(1), r(1)});
    auto en = oracle::enumerate(image, 16);
    for (const auto& p : en.points) {
        bool covered = false;
        for (const auto& [label, piece] : plan.pieces)
            if (member(piece, p)) { covered = true; break; }
        CHECK(covered);
    }
}

TEST_CASE("decomposition of two convergent children") {
    auto plan = linear_image_decompose({geomc(2), geomc(3)}, {r(1), r(1)});
    CHECK(plan.bound == BigInt(5));
    CHECK(plan.pieces.size() == 5);
    for (const auto& [label, piece] : plan.pieces) CHECK(is_discrete(piece));

    SetExpr image = linear_image_expr({geomc(2), geomc(3)}, {r(1), r(1)});
    CHECK(rank(image) == 3);
    CHECK(BigInt(static_cast<long long>(rank(image))) <= plan.bound);

    // two-sided membership between the image and the union of pieces
    auto en = oracle::enumerate(image, 12);
    for (std::size_t i = 0; i < en.points.size(); i += 7) {
        bool in_piece = false;
        for (const auto& [label, piece] : plan.pieces)
            if (member(piece, en.points[i])) { in_piece = true; break; }
        CHECK(in_piece);
    }
    for (const auto& [label, piece] : plan.pieces) {
        auto pen = oracle::enumerate(piece, 6);
        for (std::size_t i = 0; i < pen.points.size(); i += 5) CHECK(member(image, pen.points[i]));
    }
}

TEST_CASE("decomposition preconditions") {
    CHECK_THROWS_AS(linear_image_decompose({tail(r(0), r(1), true)}, {r(1)}), PreconditionError);
    CHECK_THROWS_AS(linear_image_decompose({geom(r(0), r(1), r(1, 2), false)}, {r(1)}),
                    PreconditionError);
    CHECK_THROWS_AS(linear_image_decompose({geomc(2)}, {r(0)}), ValidationError);
    CHECK_THROWS_AS(linear_image_decompose({}, {}), ValidationError);
}
