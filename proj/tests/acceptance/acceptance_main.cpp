// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout, each criterion with its runtime budget. Exit code = number of
// failed criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../gen_util.hpp"
#include "setline/cantor.hpp"
#include "setline/cli.hpp"
#include "setline/decompose.hpp"
#include "setline/encode.hpp"
#include "setline/hypothesis.hpp"
#include "setline/oracle.hpp"
#include "setline/parse.hpp"
#include "setline/render.hpp"
#include "setline/tail_combine.hpp"
#include "setline/topology.hpp"

using namespace setline;

namespace {

Rat r(long long n, long long d = 1) { return Rat(n, d); }

struct Outcome {
    bool pass = true;
    std::string note;
    void fail(const std::string& why) {
        pass = false;
        if (!note.empty()) note += "; ";
        note += why;
    }
};

std::vector<Rat> random_points(SplitMix64& rng, long long bound, std::size_t count) {
    std::set<Rat> out;
    while (out.size() < count) {
        long long den = 1 + static_cast<long long>(rng.below(97));
        if (bound * den - 1 < 1) continue;
        long long num = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(bound * den - 1)));
        out.insert(Rat(num, den));
    }
    return std::vector<Rat>(out.begin(), out.end());
}

// --- criterion 1: exhaustive window property ------------------------------

Outcome criterion1() {
    Outcome o;
    SplitMix64 rng(101);
    for (int inst = 0; inst < 100; ++inst) {
        std::vector<Rat> d = random_points(rng, 10, 50);
        auto rep = ex1_claim_check(10, d, 100);
        if (!rep.pass) {
            o.fail("instance " + std::to_string(inst) + " violated on " +
                   std::to_string(rep.violations.size()) + " pairs");
            break;
        }
        if (rep.pairs_checked != 100 * 99 / 2) {
            o.fail("wrong pair count");
            break;
        }
    }
    return o;
}

// --- criterion 2: decode inverts encode -----------------------------------

Outcome criterion2() {
    Outcome o;
    SplitMix64 rng(202);
    for (int inst = 0; inst < 100; ++inst) {
        long long N = 1 + static_cast<long long>(rng.below(10));
        std::vector<Rat> d = random_points(rng, N, 50);
        auto enc = ex1_encode(N, d);
        auto dec = ex1_decode(N, enc.a);
        std::vector<Rat> want = d;
        std::sort(want.begin(), want.end());
        if (dec != want) {
            o.fail("round trip failed at instance " + std::to_string(inst));
            break;
        }
    }
    return o;
}

// --- criterion 3: interval containment and disjointness -------------------

Outcome criterion3() {
    Outcome o;
    try {
        auto inst = cantor_build(7, 50); // validates containment + disjointness
        if (inst.records.size() != 254) o.fail("expected 254 words");
        for (const auto& rec : inst.records) {
            if (!(rec.v > r(0) && rec.v < r(1))) o.fail("v outside (0,1)");
            if (rec.points.size() != 49) o.fail("expected k = 2..50");
            for (const auto& a : rec.points)
                if (!(a > rec.interval.lo && a < rec.interval.hi)) o.fail("containment violated");
        }
        // disjointness, re-checked here explicitly
        std::vector<WordInterval> ivs;
        for (const auto& rec : inst.records) ivs.push_back(rec.interval);
        std::sort(ivs.begin(), ivs.end(), [](const WordInterval& a, const WordInterval& b) {
            return a.lo < b.lo;
        });
        for (std::size_t i = 1; i < ivs.size(); ++i)
            if (!(ivs[i - 1].hi <= ivs[i].lo)) o.fail("intervals overlap");
    } catch (const std::exception& e) {
        o.fail(e.what());
    }
    return o;
}

// --- criterion 4: non-isolation witnesses ---------------------------------

Outcome criterion4() {
    Outcome o;
    // bound first confirmed by brute force over |sigma| <= 4
    for (long long L : {4ll, 5ll}) {
        for (const Word& w : enumerate_words(L)) {
            if (static_cast<long long>(w.digits.size()) > L) continue;
            long long n = static_cast<long long>(w.digits.size());
            long long kmin = w.digits.back() == 1 ? 2 : 1;
            for (long long k = kmin; k <= 6; ++k) {
                Word tau = non_isolation_witness(w, k);
                if (!word_admissible(tau)) o.fail("inadmissible witness");
                if (tau.digits == w.digits) o.fail("witness equals its word");
                Rat gap = abs(word_v(tau) - word_v(w));
                if (!(gap > r(0))) o.fail("zero gap");
                if (!(gap <= pow(r(1, 3), static_cast<unsigned long long>(n + k - 2))))
                    o.fail("gap bound violated at " + word_str(w) + ", k=" + std::to_string(k));
            }
        }
    }
    return o;
}

// --- criterion 5: decomposition bound and coverage ------------------------

Outcome criterion5() {
    Outcome o;
    if (!(kbound(RankVector{{0}}) == BigInt(1)) || !(kbound(RankVector{{1}}) == BigInt(2)) ||
        !(kbound(RankVector{{1, 1}}) == BigInt(5))) {
        o.fail("kbound base values wrong");
        return o;
    }
    SetExpr E = geom(r(0), r(1), r(1, 2), true);
    SplitMix64 rng(505);
    int unrepresentable = 0;
    for (int draw = 0; draw < 50; ++draw) {
        long long arity = 1 + (draw % 3);
        std::vector<Rat> b;
        for (long long i = 0; i < arity; ++i) b.push_back(draw_coefficient(rng));
        std::vector<SetExpr> children(static_cast<std::size_t>(arity), E);
        BigInt K = kbound_for(children);
        SetExpr image = linear_image_expr(children, b);
        try {
            DecompositionPlan plan = linear_image_decompose(children, b);
            if (BigInt(static_cast<long long>(plan.pieces.size())) > K) {
                o.fail("draw " + std::to_string(draw) + ": piece count exceeds K");
                continue;
            }
            for (const auto& [label, piece] : plan.pieces)
                if (!is_discrete(piece))
                    o.fail("draw " + std::to_string(draw) + ": piece " + label + " not discrete");
            for (long long depth : {20ll, 40ll}) {
                auto en = oracle::enumerate(image, depth);
                std::size_t stride = std::max<std::size_t>(1, en.points.size() / 60);
                for (std::size_t i = 0; i < en.points.size(); i += stride) {
                    bool covered = false;
                    for (const auto& [label, piece] : plan.pieces)
                        if (member(piece, en.points[i])) { covered = true; break; }
                    if (!covered) {
                        o.fail("draw " + std::to_string(draw) + ": uncovered image point");
                        break;
                    }
                }
            }
            for (const auto& [label, piece] : plan.pieces) {
                auto pen = oracle::enumerate(piece, 8);
                std::size_t stride = std::max<std::size_t>(1, pen.points.size() / 25);
                for (std::size_t i = 0; i < pen.points.size(); i += stride) {
                    if (!member(image, pen.points[i])) {
                        o.fail("draw " + std::to_string(draw) + ": piece escapes the image");
                        break;
                    }
                }
            }
        } catch (const UnsupportedError&) {
            // Coefficients with an exact power relation make the isolated
            // piece inexpressible in this grammar (see the project notes);
            // the instance is re-verified through the rank instead.
            ++unrepresentable;
            if (!is_closed(image)) {
                o.fail("draw " + std::to_string(draw) + ": image not closed");
                continue;
            }
            if (!(BigInt(static_cast<long long>(rank(image))) <= K))
                o.fail("draw " + std::to_string(draw) + ": rank exceeds K");
        }
    }
    if (unrepresentable > 0)
        o.note = std::to_string(unrepresentable) +
                 "/50 draws hit coefficient coincidences; piece lists are not representable in the "
                 "grammar there, rank <= K verified instead";
    return o;
}

// --- criterion 6: ordering of translated copies ---------------------------

Outcome criterion6() {
    Outcome o;
    struct Pair {
        SetExpr y, z;
    };
    std::vector<Pair> curated = {
        {fin({r(0), r(1, 2)}), tail(r(0), r(2), true)},
        {geom(r(0), r(1), r(1, 2), true), tail(r(0), r(1, 2), true)},
        {fin({r(0)}), tail(r(5), r(3), true)},
        {normalize(union_of({geom(r(0), r(1), r(1, 3), true), fin({r(2)})})), tail(r(-4), r(3), true)},
        {fin({r(-1), r(0), r(1)}),
         normalize(union_of({tail(r(0), r(5), true), tail(r(0), r(5), false)}))},
    };
    for (std::size_t i = 0; i < curated.size(); ++i) {
        try {
            TailCombinePlan plan = tail_combine(curated[i].y, curated[i].z, -20, 20);
            if (!plan.ordering_verified) o.fail("pair " + std::to_string(i) + ": ordering flag unset");
            Bounds yb = bounds(plan.compact_part);
            for (const auto& fam : plan.families) {
                for (std::size_t a = 0; a < fam.translates.size(); ++a)
                    for (std::size_t b2 = a + 1; b2 < fam.translates.size(); ++b2) {
                        if (!(fam.translates[a] + *yb.hi < fam.translates[b2] + *yb.lo)) {
                            o.fail("pair " + std::to_string(i) + ": family " +
                                   std::to_string(fam.index) + " pairs out of order");
                        }
                    }
            }
        } catch (const std::exception& e) {
            o.fail("pair " + std::to_string(i) + ": " + e.what());
        }
    }
    return o;
}

// --- criterion 7: symbolic topology laws ----------------------------------

Outcome criterion7() {
    Outcome o;
    testgen::ExprGen gen(707);
    int checked = 0;
    for (int i = 0; i < 350; ++i) {
        SetExpr a = gen.gen_normalized(1, true, true);
        SetExpr b = gen.gen_normalized(1, true, true);
        SetExpr u = normalize(SetExpr{Union{{a, b}}});
        ++checked;
        auto du = acc_points(u), da = acc_points(a), db = acc_points(b);
        std::optional<SetExpr> expected;
        if (da && db) expected = normalize(SetExpr{Union{{*da, *db}}});
        else if (da) expected = da;
        else if (db) expected = db;
        bool same = du.has_value() == expected.has_value() && (!du || expr_eq(*du, *expected));
        if (!same) o.fail("derivative does not distribute at sample " + std::to_string(i));
        if (rank(u) != std::max(rank(a), rank(b))) o.fail("rank law fails at sample " + std::to_string(i));
    }
    for (int i = 0; i < 350; ++i) {
        SetExpr x = gen.gen_normalized(1, false, true);
        Rat alpha = gen.nonzero_rat();
        Rat beta = gen.small_rat();
        SetExpr mapped = normalize(affine(x, alpha, beta));
        ++checked;
        auto am = acc_points(mapped), ax = acc_points(x);
        std::optional<SetExpr> expected;
        if (ax) expected = normalize(affine(*ax, alpha, beta));
        bool same = am.has_value() == expected.has_value() && (!am || expr_eq(*am, *expected));
        if (!same) o.fail("affine equivariance of acc fails at sample " + std::to_string(i));
        if (rank(mapped) != rank(x)) o.fail("affine equivariance of rank fails at sample " + std::to_string(i));
    }
    for (int i = 0; i < 300; ++i) {
        SetExpr e = gen.gen_normalized(1, false, true);
        ++checked;
        auto a = acc_points(e);
        if (!a) continue;
        bool found = false;
        for (long long depth : {8ll, 16ll, 32ll}) {
            auto en = oracle::enumerate(e, depth);
            for (const auto& p : en.points)
                if (!member(*a, p)) { found = true; break; }
            if (found) break;
        }
        if (!found) o.fail("no isolated member found at sample " + std::to_string(i));
    }
    o.note = std::to_string(checked) + " random expressions";
    return o;
}

// --- criterion 8: oracle consistency ---------------------------------------

long long derived_depth(const SetExpr& e) {
    // depth at which every geometric tail bound drops below 2^-13
    struct Walk {
        long long depth = 15;
        void visit(const SetExpr& x) {
            if (x.is<Geom>()) {
                const auto& g = x.as<Geom>();
                Rat need(1, 8192);
                Rat t = abs(g.scale);
                long long d = 0;
                while (t >= need && d < 2000) {
                    t *= abs(g.ratio);
                    ++d;
                }
                depth = std::max(depth, d + 1);
            } else if (x.is<Union>()) {
                for (const auto& c : x.as<Union>().children) visit(c);
            } else if (x.is<MSum>()) {
                for (const auto& c : x.as<MSum>().children) visit(c);
            }
        }
    } w;
    w.visit(e);
    return w.depth;
}

Outcome criterion8() {
    Outcome o;
    std::vector<SetExpr> corpus = {
        geom(r(0), r(1), r(1, 2), true),
        geom(r(5), r(-2), r(2, 3), true),
        normalize(union_of({geom(r(0), r(1), r(1, 2), true), fin({r(4), r(9, 2)})})),
        normalize(union_of({tail(r(0), r(1), true), fin({r(-5), r(-9, 2)})})),
        normalize(msum_of({geom(r(0), r(1), r(1, 2), true), geom(r(0), r(1), r(1, 3), true)})),
        normalize(msum_of({geom(r(0), r(1), r(1, 2), true), fin({r(0), r(10)})})),
        normalize(msum_of({fin({r(0), r(1, 2)}), tail(r(0), r(2), true)})),
        normalize(msum_of({geom(r(0), r(1), r(1, 2), true), tail(r(0), r(2), true)})),
    };
    for (std::size_t ci = 0; ci < corpus.size(); ++ci) {
        const SetExpr& e = corpus[ci];
        long long depth = derived_depth(e);
        if (auto a = acc_points(e)) {
            auto pts = oracle::enumerate(*a, 5).points;
            std::size_t stride = std::max<std::size_t>(1, pts.size() / 20);
            for (std::size_t i = 0; i < pts.size(); i += stride) {
                if (oracle::accumulation_probe(e, pts[i], depth, {r(1), 12}) != oracle::Probe::Confirmed)
                    o.fail("corpus " + std::to_string(ci) + ": acc point not confirmed");
            }
        }
        if (auto iso = iso_points(e)) {
            auto pts = oracle::enumerate(*iso, 4).points;
            std::size_t stride = std::max<std::size_t>(1, pts.size() / 12);
            for (std::size_t i = 0; i < pts.size(); i += stride) {
                try {
                    auto r15 = oracle::isolation_radius(e, pts[i], 15);
                    auto r30 = oracle::isolation_radius(e, pts[i], 30);
                    if (!r15.certified || !r30.certified)
                        o.fail("corpus " + std::to_string(ci) + ": radius not certified");
                    else if (!(r15.radius == r30.radius))
                        o.fail("corpus " + std::to_string(ci) + ": radius unstable");
                } catch (const ValidationError&) {
                    // isolated point deeper than the window; enlarge
                    auto r40 = oracle::isolation_radius(e, pts[i], 40);
                    auto r80 = oracle::isolation_radius(e, pts[i], 80);
                    if (!r40.certified || !(r40.radius == r80.radius))
                        o.fail("corpus " + std::to_string(ci) + ": radius unstable (deep)");
                }
            }
        }
    }
    return o;
}

// --- criterion 9: round trips and diagnostics ------------------------------

Outcome criterion9() {
    Outcome o;
    testgen::ExprGen gen(909);
    for (int i = 0; i < 1000; ++i) {
        SetExpr e = gen.gen_normalized(2, false, true);
        SetExpr back = parse(render(e));
        if (!expr_eq(back, e)) {
            o.fail("round trip failed: " + render(e));
            break;
        }
    }
    std::vector<std::string> malformed = {
        "fin{}",
        "fin{1,",
        "geom(0,1,3/2)",
        "geom(0,0,1/2)",
        "tail(0,-1,up)",
        "union(fin{1})",
        "msum(tail(0,1,up), tail(0,2,up))",
        "affine(fin{1}, 0, 0)",
        "fin{1/0}",
        "fin{1} trailing",
        "unknown(1,2)",
    };
    for (const auto& text : malformed) {
        std::ostringstream out, err;
        int code = cli::run({"props", text}, out, err);
        if (code != 2) {
            o.fail("malformed input accepted: " + text);
            continue;
        }
        std::string msg = err.str();
        bool positioned = msg.find(" at ") != std::string::npos && msg.find(':') != std::string::npos;
        if (!positioned) o.fail("diagnostic lacks a position: " + msg);
    }
    return o;
}

struct Criterion {
    int id;
    const char* desc;
    double budget_sec;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "window property, 100 random instances, all pairs to index 100", 5.0, criterion1},
        {2, "encode/decode round trip, 100 random instances of 50 points", 5.0, criterion2},
        {3, "word construction: containment and disjointness to length 7, k <= 50", 10.0, criterion3},
        {4, "non-isolation witnesses admissible with exact gap bound", 2.0, criterion4},
        {5, "piece bound, discreteness and coverage of decompositions", 30.0, criterion5},
        {6, "translate ordering on the curated compact-plus-tail pairs", 2.0, criterion6},
        {7, "symbolic topology laws on 1000 random expressions", 60.0, criterion7},
        {8, "oracle confirms symbolic accumulation and isolation", 30.0, criterion8},
        {9, "expression language round trip and positioned diagnostics", 5.0, criterion9},
    };
    int failures = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (sec > c.budget_sec) o.fail("runtime budget exceeded");
        std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.desc;
        if (!o.note.empty()) std::cout << " (" << o.note << ")";
        std::cout << " [" << static_cast<long long>(sec * 1000) << " ms, budget "
                  << static_cast<long long>(c.budget_sec * 1000) << " ms]\n";
        if (!o.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures;
}
