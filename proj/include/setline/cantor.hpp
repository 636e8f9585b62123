#pragma once

// The admissible-word construction: a bounded discrete set whose closure
// picks up a set with no isolated points. Words over {0,1,2} with last digit
// nonzero and earlier digits never 1 index pairwise disjoint open intervals;
// each carries a harmonic sequence converging to its base-3 value.

#include <string>
#include <vector>

#include "setline/errors.hpp"
#include "setline/rational.hpp"

namespace setline {

struct Word {
    std::vector<int> digits; // last in {1,2}, earlier in {0,2}
};

inline bool word_admissible(const Word& w) {
    if (w.digits.empty()) return false;
    for (std::size_t j = 0; j + 1 < w.digits.size(); ++j)
        if (w.digits[j] != 0 && w.digits[j] != 2) return false;
    int last = w.digits.back();
    return last == 1 || last == 2;
}

inline void require_admissible(const Word& w) {
    if (!word_admissible(w)) throw ValidationError("word is not admissible");
}

inline std::string word_str(const Word& w) {
    std::string s;
    for (std::size_t j = 0; j < w.digits.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(w.digits[j]);
    }
    return s;
}

// u: value of the proper prefix; v: value of the whole word (base 3).
inline Rat word_u(const Word& w) {
    Rat u(0), p3(1, 3);
    for (std::size_t j = 0; j + 1 < w.digits.size(); ++j) {
        u += Rat(w.digits[j]) * p3;
        p3 *= Rat(1, 3);
    }
    return u;
}

inline Rat word_v(const Word& w) {
    Rat v(0), p3(1, 3);
    for (std::size_t j = 0; j < w.digits.size(); ++j) {
        v += Rat(w.digits[j]) * p3;
        p3 *= Rat(1, 3);
    }
    return v;
}

struct WordInterval {
    Rat lo, hi; // open interval
};

inline WordInterval word_interval(const Word& w) {
    require_admissible(w);
    auto n = static_cast<unsigned long long>(w.digits.size());
    Rat v = word_v(w);
    Rat width = pow(Rat(1, 3), n + 1);
    if (w.digits.back() == 1) return {v, v + width};
    return {v - width, v};
}

// a_{sigma,k} = v - (-1)^{last} / (k * 3^(n+1)); sits strictly inside the
// word's interval for k >= 2 (k = 1 lands exactly on an endpoint).
inline Rat word_point(const Word& w, long long k) {
    require_admissible(w);
    if (k < 2) throw ValidationError("sequence index k must be >= 2");
    auto n = static_cast<unsigned long long>(w.digits.size());
    Rat step = pow(Rat(1, 3), n + 1) / Rat(k);
    return w.digits.back() == 1 ? word_v(w) + step : word_v(w) - step;
}

// All admissible words of length <= max_len, ordered by length then
// lexicographically; exactly 2^n words of each length n.
inline std::vector<Word> enumerate_words(long long max_len) {
    if (max_len < 1) throw ValidationError("enumerate_words: max length must be >= 1");
    std::vector<Word> out;
    for (long long n = 1; n <= max_len; ++n) {
        std::vector<std::vector<int>> prefixes{{}};
        for (long long j = 1; j < n; ++j) {
            std::vector<std::vector<int>> next;
            for (const auto& p : prefixes)
                for (int d : {0, 2}) {
                    auto q = p;
                    q.push_back(d);
                    next.push_back(std::move(q));
                }
            prefixes = std::move(next);
        }
        for (const auto& p : prefixes)
            for (int d : {1, 2}) {
                Word w{p};
                w.digits.push_back(d);
                out.push_back(std::move(w));
            }
    }
    return out;
}

struct WordRecord {
    Word word;
    Rat u, v;
    WordInterval interval;
    std::vector<Rat> points; // a_{sigma,k} for k in [2, k_max]
};

struct CantorInstance {
    long long max_len = 0, k_max = 0;
    std::vector<WordRecord> records;
    std::vector<Rat> base_values;   // D truncation: the v(sigma), sorted
    std::vector<Rat> sample_points; // E truncation: all a_{sigma,k}, sorted
};

inline CantorInstance cantor_build(long long max_len, long long k_max) {
    if (max_len < 1) throw ValidationError("cantor_build: max length must be >= 1");
    if (k_max < 2) throw ValidationError("cantor_build: k_max must be >= 2");
    CantorInstance inst;
    inst.max_len = max_len;
    inst.k_max = k_max;
    for (const Word& w : enumerate_words(max_len)) {
        WordRecord rec;
        rec.word = w;
        rec.u = word_u(w);
        rec.v = word_v(w);
        rec.interval = word_interval(w);
        if (!(rec.v > Rat(0) && rec.v < Rat(1)))
            throw std::logic_error("cantor_build: v(" + word_str(w) + ") outside (0,1)");
        for (long long k = 2; k <= k_max; ++k) {
            Rat a = word_point(w, k);
            if (!(a > rec.interval.lo && a < rec.interval.hi))
                throw std::logic_error("cantor_build: point escapes the interval of " + word_str(w));
            rec.points.push_back(a);
            inst.sample_points.push_back(a);
        }
        inst.base_values.push_back(rec.v);
        inst.records.push_back(std::move(rec));
    }
    // Intervals must be pairwise disjoint; sort by left endpoint and compare
    // neighbours (exact comparisons).
    std::vector<const WordRecord*> by_lo;
    for (const auto& r : inst.records) by_lo.push_back(&r);
    std::sort(by_lo.begin(), by_lo.end(),
              [](const WordRecord* a, const WordRecord* b) { return a->interval.lo < b->interval.lo; });
    for (std::size_t i = 1; i < by_lo.size(); ++i) {
        if (!(by_lo[i - 1]->interval.hi <= by_lo[i]->interval.lo))
            throw std::logic_error("cantor_build: intervals of " + word_str(by_lo[i - 1]->word) +
                                   " and " + word_str(by_lo[i]->word) + " overlap");
    }
    std::sort(inst.base_values.begin(), inst.base_values.end());
    std::sort(inst.sample_points.begin(), inst.sample_points.end());
    return inst;
}

// Another admissible word whose value approaches v(sigma) as k grows:
// for last digit 1, drop it and append 0 then k-1 twos (k >= 2);
// for last digit 2, append k-1 zeros then a final 1 (k >= 1).
inline Word non_isolation_witness(const Word& w, long long k) {
    require_admissible(w);
    Word out;
    if (w.digits.back() == 1) {
        if (k < 2) throw PreconditionError("witness: k must be >= 2 when the last digit is 1");
        out.digits.assign(w.digits.begin(), w.digits.end() - 1);
        out.digits.push_back(0);
        for (long long j = 1; j < k; ++j) out.digits.push_back(2);
    } else {
        if (k < 1) throw PreconditionError("witness: k must be >= 1");
        out.digits = w.digits;
        for (long long j = 1; j < k; ++j) out.digits.push_back(0);
        out.digits.push_back(1);
    }
    if (!word_admissible(out)) throw std::logic_error("witness: produced an inadmissible word");
    return out;
}

} // namespace setline
