#pragma once

// Encoding a finite list of bounded points into a strictly increasing
// discrete closed sequence, with the pair-difference decoder and the
// exhaustive check of the window property the decoder relies on:
// 0 < a_n - a_m < N exactly when n = m+1 with m odd.

#include <set>
#include <string>
#include <vector>

#include "setline/errors.hpp"
#include "setline/rational.hpp"

namespace setline {

// Indices are 1-based throughout: a_1 = 2N, and the decoder uses the pair
// (a_{2n-1}, a_{2n}) for the n-th point.
struct Ex1Instance {
    long long bound = 0;      // N
    std::vector<Rat> points;  // d_1..d_M, distinct, in (0, N)
    std::vector<Rat> a;       // a_1..a_{2M}, strictly increasing
};

inline Rat ex1_term(long long N, const std::vector<Rat>& d, long long n) {
    if (n < 1) throw ValidationError("ex1: index must be >= 1");
    if (n % 2 == 1) return Rat(N) * Rat(n + 1);
    if (n / 2 > static_cast<long long>(d.size()))
        throw ValidationError("ex1: index " + std::to_string(n) + " needs more points");
    return Rat(N) * Rat(n) + d[static_cast<std::size_t>(n / 2 - 1)];
}

inline Ex1Instance ex1_encode(long long N, const std::vector<Rat>& d) {
    if (N <= 0) throw ValidationError("ex1: bound must be positive");
    std::set<Rat> seen;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(d[i] > Rat(0)) || !(d[i] < Rat(N)))
            throw ValidationError("ex1: point #" + std::to_string(i + 1) + " not in (0," +
                                  std::to_string(N) + ")");
        if (!seen.insert(d[i]).second)
            throw ValidationError("ex1: point #" + std::to_string(i + 1) + " is a duplicate");
    }
    Ex1Instance inst;
    inst.bound = N;
    inst.points = d;
    for (long long n = 1; n <= 2 * static_cast<long long>(d.size()); ++n)
        inst.a.push_back(ex1_term(N, d, n));
    for (std::size_t i = 1; i < inst.a.size(); ++i)
        if (!(inst.a[i - 1] < inst.a[i])) throw std::logic_error("ex1: sequence not increasing");
    return inst;
}

// {x : 0 < x < N and x = x1 - x2 for some x1, x2 in E}, by exhaustive pairs.
inline std::vector<Rat> ex1_decode(long long N, const std::vector<Rat>& E) {
    if (N <= 0) throw ValidationError("ex1: bound must be positive");
    std::set<Rat> out;
    for (const auto& x1 : E)
        for (const auto& x2 : E) {
            Rat x = x1 - x2;
            if (x > Rat(0) && x < Rat(N)) out.insert(x);
        }
    return std::vector<Rat>(out.begin(), out.end());
}

struct Ex1ClaimViolation {
    long long n = 0, m = 0;
    Rat difference;
    bool in_window = false;   // 0 < a_n - a_m < N held
    bool index_form = false;  // n = m+1 with m odd held
};

struct Ex1ClaimReport {
    long long max_index = 0;
    long long pairs_checked = 0;
    std::vector<Ex1ClaimViolation> violations;
    bool pass = false;
};

// Exhaustively verify 0 < a_n - a_m < N  <=>  (n = m+1 and m odd) for all
// 1 <= m < n <= max_index.
inline Ex1ClaimReport ex1_claim_check(long long N, const std::vector<Rat>& d, long long max_index) {
    if (max_index < 2) throw ValidationError("ex1: max index must be at least 2");
    std::vector<Rat> a;
    for (long long n = 1; n <= max_index; ++n) a.push_back(ex1_term(N, d, n));
    Ex1ClaimReport rep;
    rep.max_index = max_index;
    for (long long m = 1; m < max_index; ++m) {
        for (long long n = m + 1; n <= max_index; ++n) {
            ++rep.pairs_checked;
            Rat diff = a[static_cast<std::size_t>(n - 1)] - a[static_cast<std::size_t>(m - 1)];
            bool in_window = diff > Rat(0) && diff < Rat(N);
            bool index_form = (n == m + 1) && (m % 2 == 1);
            if (in_window != index_form)
                rep.violations.push_back({n, m, diff, in_window, index_form});
        }
    }
    rep.pass = rep.violations.empty();
    return rep;
}

} // namespace setline
