#pragma once

// Command-line surface. One JSON record per result line on stdout (rationals
// as exact strings, sets as their expression text); human-oriented notes go
// to stderr. Exit codes: 0 success, 1 a checked property was violated,
// 2 parse or validation error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "setline/cantor.hpp"
#include "setline/decompose.hpp"
#include "setline/encode.hpp"
#include "setline/hypothesis.hpp"
#include "setline/oracle.hpp"
#include "setline/parse.hpp"
#include "setline/points_file.hpp"
#include "setline/render.hpp"
#include "setline/tail_combine.hpp"
#include "setline/topology.hpp"

namespace setline::cli {

using json = nlohmann::ordered_json;

inline json rat_json(const Rat& r) { return r.to_string(); }

inline json rat_list_json(const std::vector<Rat>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(rat_json(r));
    return a;
}

inline json set_json(const SetExpr& e) { return render(e); }

inline json opt_set_json(const std::optional<SetExpr>& e) {
    return e ? json(render(*e)) : json(nullptr);
}

inline json big_json(const BigInt& b) {
    if (b.fits_int64()) return b.as_int64();
    return b.to_string();
}

namespace detail {

inline std::vector<long long> parse_int_list(const std::string& s, const char* what) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": bad integer '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::vector<Rat> parse_rat_list(const std::string& s, const char* what) {
    std::vector<Rat> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(Rat::parse(item));
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": bad rational '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

inline std::pair<long long, long long> parse_window(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos)
        throw ValidationError("window must look like A..B, got '" + s + "'");
    try {
        long long a = std::stoll(s.substr(0, dots));
        long long b = std::stoll(s.substr(dots + 2));
        return {a, b};
    } catch (const std::exception&) {
        throw ValidationError("window must look like A..B, got '" + s + "'");
    }
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact symbolic topology of structured countable sets of rationals"};
    app.require_subcommand(1);

    std::string expr_text, expr_text2;
    long long depth = 30;
    std::string ranks_text, coeffs_text, window_text = "-20..20", sigma_text, points_path;
    long long arity = 1, trials = 5, max_index = 20, max_len = 4, max_k = 10, kidx = 2, bound = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> expr_list;

    auto* c_rank = app.add_subcommand("rank", "Cantor-Bendixson rank of the closure");
    c_rank->add_option("expr", expr_text)->required();
    auto* c_lpt = app.add_subcommand("lpt", "derived set of a closed expression");
    c_lpt->add_option("expr", expr_text)->required();
    auto* c_iso = app.add_subcommand("iso", "isolated points");
    c_iso->add_option("expr", expr_text)->required();
    auto* c_closure = app.add_subcommand("closure", "symbolic closure");
    c_closure->add_option("expr", expr_text)->required();
    auto* c_props = app.add_subcommand("props", "closed / discrete / compact");
    c_props->add_option("expr", expr_text)->required();
    auto* c_enum = app.add_subcommand("enum", "depth-bounded enumeration with exact tail bound");
    c_enum->add_option("expr", expr_text)->required();
    c_enum->add_option("--depth", depth, "truncation depth")->capture_default_str();
    auto* c_kbound = app.add_subcommand("kbound", "piece bound for a rank vector");
    c_kbound->add_option("--ranks", ranks_text, "comma-separated N_i")->required();
    auto* c_limage = app.add_subcommand("limage", "decompose a linear image of compact sets");
    c_limage->add_option("--coeffs", coeffs_text, "comma-separated coefficients")->required();
    c_limage->add_option("exprs", expr_list, "compact child expressions")->required();
    auto* c_combine = app.add_subcommand("combine-tail", "combine a compact part with a tail");
    c_combine->add_option("yexpr", expr_text)->required();
    c_combine->add_option("zexpr", expr_text2)->required();
    c_combine->add_option("--window", window_text, "iota index window A..B")->capture_default_str();
    auto* c_hyp = app.add_subcommand("hypothesis", "sampled closure/decomposition check");
    c_hyp->add_option("expr", expr_text)->required();
    c_hyp->add_option("--arity", arity)->required();
    c_hyp->add_option("--trials", trials)->capture_default_str();
    c_hyp->add_option("--seed", seed)->capture_default_str();

    auto* c_ex1 = app.add_subcommand("ex1", "bounded-point-list encoding");
    c_ex1->require_subcommand(1);
    auto* c_ex1_enc = c_ex1->add_subcommand("encode", "encode points into a discrete sequence");
    auto* c_ex1_dec = c_ex1->add_subcommand("decode", "decode a sequence back to points");
    auto* c_ex1_claim = c_ex1->add_subcommand("claim", "exhaustive window property check");
    for (auto* sub : {c_ex1_enc, c_ex1_dec, c_ex1_claim}) {
        sub->add_option("--bound", bound, "the bound N")->required();
        sub->add_option("--points", points_path, "points file")->required();
    }
    c_ex1_claim->add_option("--max-index", max_index)->capture_default_str();

    auto* c_cantor = app.add_subcommand("cantor", "admissible-word construction");
    c_cantor->require_subcommand(1);
    auto* c_cgen = c_cantor->add_subcommand("gen", "emit per-word records");
    auto* c_cverify = c_cantor->add_subcommand("verify", "check containment and disjointness");
    for (auto* sub : {c_cgen, c_cverify}) {
        sub->add_option("--max-len", max_len)->capture_default_str();
        sub->add_option("--max-k", max_k)->capture_default_str();
    }
    auto* c_cwitness = c_cantor->add_subcommand("witness", "non-isolation witness word");
    c_cwitness->add_option("--sigma", sigma_text, "comma-separated digits")->required();
    c_cwitness->add_option("--k", kidx)->required();

    try {
        std::vector<const char*> argv;
        argv.push_back("setline");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (*c_rank) {
            json j{{"rank", static_cast<long long>(rank(parse(expr_text)))}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_lpt) {
            json j{{"lpt", opt_set_json(lpt_set(parse(expr_text)))}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_iso) {
            json j{{"iso", opt_set_json(iso_points(parse(expr_text)))}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_closure) {
            json j{{"closure", set_json(closure(parse(expr_text)))}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_props) {
            SetExpr e = parse(expr_text);
            json j{{"closed", is_closed(e)}, {"discrete", is_discrete(e)}, {"compact", is_compact(e)}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_enum) {
            auto en = oracle::enumerate(parse(expr_text), depth);
            json j{{"points", rat_list_json(en.points)},
                   {"tail_bound", en.tail_bound ? rat_json(*en.tail_bound) : json(nullptr)}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_kbound) {
            RankVector rv{detail::parse_int_list(ranks_text, "--ranks")};
            json j{{"K", big_json(kbound(rv))}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_limage) {
            std::vector<Rat> b = detail::parse_rat_list(coeffs_text, "--coeffs");
            std::vector<SetExpr> E;
            for (const auto& t : expr_list) E.push_back(parse(t));
            DecompositionPlan plan = linear_image_decompose(E, b);
            json pieces = json::array();
            for (const auto& [label, piece] : plan.pieces)
                pieces.push_back(json{{"label", label}, {"set", set_json(piece)}});
            json j{{"K", big_json(plan.bound)},
                   {"rank_vector", plan.rank_vector},
                   {"piece_count", plan.pieces.size()},
                   {"pieces", pieces}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_combine) {
            auto [wlo, whi] = detail::parse_window(window_text);
            TailCombinePlan plan = tail_combine(parse(expr_text), parse(expr_text2), wlo, whi);
            json fams = json::array();
            for (const auto& fam : plan.families) {
                json sub = json::array();
                for (const auto& p : fam.sub_pieces) sub.push_back(set_json(p));
                fams.push_back(json{{"index", fam.index},
                                    {"translates", rat_list_json(fam.translates)},
                                    {"pieces", sub}});
            }
            json j{{"gap", rat_json(plan.gap)},
                   {"diameter", rat_json(plan.diameter)},
                   {"N", rat_json(plan.bound_n)},
                   {"M", plan.modulus},
                   {"shift", rat_json(plan.shift)},
                   {"window", json::array({plan.window_lo, plan.window_hi})},
                   {"iota", rat_list_json(plan.iota)},
                   {"ordering_verified", plan.ordering_verified},
                   {"families", fams}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_hyp) {
            HypothesisReport rep = hypothesis_check(parse(expr_text), arity, trials, seed);
            for (const auto& tr : rep.trial_reports) {
                json j{{"trial", tr.trial},
                       {"coeffs", rat_list_json(tr.coeffs)},
                       {"K", big_json(tr.bound)},
                       {"piece_count", tr.piece_count},
                       {"rank", tr.image_rank},
                       {"witnessed", tr.witnessed},
                       {"pieces_discrete", tr.pieces_discrete},
                       {"union_closed", tr.union_closed},
                       {"pass", tr.pass}};
                out << j.dump() << "\n";
            }
            json j{{"pass", rep.pass}};
            out << j.dump() << "\n";
            if (!rep.pass) err << "hypothesis check failed\n";
            return rep.pass ? 0 : 1;
        }
        if (*c_ex1_enc) {
            auto inst = ex1_encode(bound, read_points_file(points_path));
            json j{{"a", rat_list_json(inst.a)}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_ex1_dec) {
            auto dec = ex1_decode(bound, read_points_file(points_path));
            json j{{"decoded", rat_list_json(dec)}};
            out << j.dump() << "\n";
            return 0;
        }
        if (*c_ex1_claim) {
            auto rep = ex1_claim_check(bound, read_points_file(points_path), max_index);
            json viols = json::array();
            for (const auto& v : rep.violations)
                viols.push_back(json{{"n", v.n},
                                     {"m", v.m},
                                     {"difference", rat_json(v.difference)},
                                     {"in_window", v.in_window},
                                     {"index_form", v.index_form}});
            json j{{"pairs_checked", rep.pairs_checked}, {"violations", viols}, {"pass", rep.pass}};
            out << j.dump() << "\n";
            if (!rep.pass) err << "claim violated on " << rep.violations.size() << " pairs\n";
            return rep.pass ? 0 : 1;
        }
        if (*c_cgen) {
            auto inst = cantor_build(max_len, max_k);
            for (const auto& rec : inst.records) {
                json j{{"sigma", word_str(rec.word)},
                       {"u", rat_json(rec.u)},
                       {"v", rat_json(rec.v)},
                       {"interval", json::array({rat_json(rec.interval.lo), rat_json(rec.interval.hi)})},
                       {"points", rat_list_json(rec.points)}};
                out << j.dump() << "\n";
            }
            return 0;
        }
        if (*c_cverify) {
            try {
                auto inst = cantor_build(max_len, max_k);
                json j{{"words", inst.records.size()},
                       {"points_per_word", max_k - 1},
                       {"pass", true}};
                out << j.dump() << "\n";
                return 0;
            } catch (const std::logic_error& e) {
                json j{{"pass", false}, {"error", e.what()}};
                out << j.dump() << "\n";
                err << e.what() << "\n";
                return 1;
            }
        }
        if (*c_cwitness) {
            Word w;
            for (long long d : detail::parse_int_list(sigma_text, "--sigma"))
                w.digits.push_back(static_cast<int>(d));
            require_admissible(w);
            Word tau = non_isolation_witness(w, kidx);
            json j{{"witness", word_str(tau)},
                   {"v", rat_json(word_v(tau))},
                   {"gap", rat_json(abs(word_v(tau) - word_v(w)))}};
            out << j.dump() << "\n";
            return 0;
        }
    } catch (const ParseError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        err << e.what() << "\n";
        return 2;
    }
    err << "no command handled\n";
    return 2;
}

} // namespace setline::cli
