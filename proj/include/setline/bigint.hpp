#pragma once

// Arbitrary-precision signed integer. Values that fit in a machine word are
// kept inline; arithmetic promotes to limb vectors only on overflow, so the
// common case (small numerators and denominators) never allocates.

#include <algorithm>
#include <cstdint>
#include <compare>
#include <string>
#include <string_view>
#include <stdexcept>
#include <vector>

namespace setline {

class BigInt {
public:
    BigInt() = default;
    BigInt(long long v) : small_(v) {}
    BigInt(long v) : small_(v) {}
    BigInt(int v) : small_(v) {}
    BigInt(unsigned v) : small_(static_cast<long long>(v)) {}

    explicit BigInt(std::string_view s) { *this = parse(s); }

    static BigInt parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty string");
        bool neg = false;
        std::size_t i = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = (s[0] == '-');
            i = 1;
        }
        if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r(0);
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("BigInt: bad digit in \"" + std::string(s) + "\"");
            r = r * BigInt(10) + BigInt(s[i] - '0');
        }
        return neg ? -r : r;
    }

    bool is_small() const { return mag_.empty(); }
    bool is_zero() const { return is_small() ? small_ == 0 : false; }
    bool is_negative() const { return sign() < 0; }

    int sign() const {
        if (is_small()) return small_ < 0 ? -1 : (small_ > 0 ? 1 : 0);
        return neg_ ? -1 : 1;
    }

    bool fits_int64() const { return is_small(); }
    long long as_int64() const {
        if (!is_small()) throw std::overflow_error("BigInt: does not fit int64");
        return small_;
    }

    // Number of base-2 digits of |x|; bit_length(0) == 0.
    std::size_t bit_length() const {
        if (is_small()) {
            std::uint64_t m = uabs_(small_);
            std::size_t n = 0;
            while (m) { ++n; m >>= 1; }
            return n;
        }
        std::uint32_t top = mag_.back();
        std::size_t n = (mag_.size() - 1) * 32;
        while (top) { ++n; top >>= 1; }
        return n;
    }

    friend BigInt operator-(const BigInt& a) {
        if (a.is_small()) {
            if (a.small_ == INT64_MIN) return from_mag_(false, {0u, 0x80000000u}, false);
            return BigInt(-a.small_);
        }
        BigInt r = a;
        r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.is_small() && b.is_small()) {
            __int128 s = static_cast<__int128>(a.small_) + b.small_;
            return from_i128(s);
        }
        return add_big_(a, b, false);
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) {
        if (a.is_small() && b.is_small()) {
            __int128 s = static_cast<__int128>(a.small_) - b.small_;
            return from_i128(s);
        }
        return add_big_(a, b, true);
    }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_small() && b.is_small()) {
            __int128 p = static_cast<__int128>(a.small_) * b.small_;
            return from_i128(p);
        }
        std::vector<std::uint32_t> am = a.mag_limbs_(), bm = b.mag_limbs_();
        std::vector<std::uint32_t> pm(am.size() + bm.size(), 0);
        for (std::size_t i = 0; i < am.size(); ++i) {
            std::uint64_t carry = 0;
            for (std::size_t j = 0; j < bm.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(am[i]) * bm[j] + pm[i + j] + carry;
                pm[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            pm[i + bm.size()] += static_cast<std::uint32_t>(carry);
        }
        return from_mag_(a.sign() * b.sign() < 0, std::move(pm), true);
    }

    // Truncated division (C++ semantics): quotient rounds toward zero,
    // remainder has the sign of the dividend.
    friend void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        if (a.is_small() && b.is_small() && !(a.small_ == INT64_MIN && b.small_ == -1)) {
            q = BigInt(a.small_ / b.small_);
            r = BigInt(a.small_ % b.small_);
            return;
        }
        std::vector<std::uint32_t> am = a.mag_limbs_(), bm = b.mag_limbs_();
        std::vector<std::uint32_t> qm(am.size(), 0), rm;
        for (std::size_t i = am.size(); i-- > 0;) {
            for (int bit = 31; bit >= 0; --bit) {
                shl1_(rm);
                if ((am[i] >> bit) & 1u) {
                    if (rm.empty()) rm.push_back(1u);
                    else rm[0] |= 1u;
                }
                if (mag_cmp_(rm, bm) >= 0) {
                    mag_sub_(rm, bm);
                    qm[i] |= (1u << bit);
                }
            }
        }
        bool qneg = a.sign() * b.sign() < 0;
        q = from_mag_(qneg, std::move(qm), true);
        r = from_mag_(a.sign() < 0, std::move(rm), true);
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }
    BigInt& operator/=(const BigInt& o) { return *this = *this / o; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return (a <=> b) == std::strong_ordering::equal;
    }

    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        int sa = a.sign(), sb = b.sign();
        if (sa != sb) return sa <=> sb;
        if (sa == 0) return std::strong_ordering::equal;
        if (a.is_small() && b.is_small()) return a.small_ <=> b.small_;
        int c = mag_cmp_(a.mag_limbs_(), b.mag_limbs_());
        if (sa < 0) c = -c;
        return c <=> 0;
    }

    friend BigInt abs(const BigInt& a) { return a.sign() < 0 ? -a : a; }

    friend BigInt gcd(const BigInt& a, const BigInt& b) {
        if (a.is_small() && b.is_small()) {
            std::uint64_t x = uabs_(a.small_), y = uabs_(b.small_);
            while (y) { std::uint64_t t = x % y; x = y; y = t; }
            // gcd(INT64_MIN, 0) = 2^63 does not fit int64; go through from_u64_.
            return from_u64_(x);
        }
        BigInt x = abs(a), y = abs(b);
        while (!y.is_zero()) {
            BigInt t = x % y;
            x = y;
            y = t;
        }
        return x;
    }

    friend BigInt pow(const BigInt& base, unsigned long long e) {
        BigInt r(1), b = base;
        while (e) {
            if (e & 1ull) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    static BigInt from_i128(__int128 v) {
        if (v >= INT64_MIN && v <= INT64_MAX) return BigInt(static_cast<long long>(v));
        bool neg = v < 0;
        unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
        std::vector<std::uint32_t> limbs;
        while (m) {
            limbs.push_back(static_cast<std::uint32_t>(m));
            m >>= 32;
        }
        return from_mag_(neg, std::move(limbs), false);
    }

    std::string to_string() const {
        if (is_small()) return std::to_string(small_);
        std::string out;
        BigInt x = abs(*this), q, r;
        const BigInt chunk(1000000000);
        std::vector<std::uint32_t> parts;
        while (!x.is_zero()) {
            divmod(x, chunk, q, r);
            parts.push_back(static_cast<std::uint32_t>(r.small_));
            x = q;
        }
        out = std::to_string(parts.back());
        for (std::size_t i = parts.size() - 1; i-- > 0;) {
            std::string p = std::to_string(parts[i]);
            out += std::string(9 - p.size(), '0') + p;
        }
        return (sign() < 0 ? "-" : "") + out;
    }

private:
    // Inline value when mag_ is empty, otherwise sign + little-endian limbs.
    long long small_ = 0;
    bool neg_ = false;
    std::vector<std::uint32_t> mag_;

    static std::uint64_t uabs_(long long v) {
        return v < 0 ? ~static_cast<std::uint64_t>(v) + 1u : static_cast<std::uint64_t>(v);
    }

    static BigInt from_u64_(std::uint64_t m) {
        if (m <= static_cast<std::uint64_t>(INT64_MAX)) return BigInt(static_cast<long long>(m));
        std::vector<std::uint32_t> limbs{static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m >> 32)};
        return from_mag_(false, std::move(limbs), false);
    }

    std::vector<std::uint32_t> mag_limbs_() const {
        if (!is_small()) return mag_;
        std::vector<std::uint32_t> limbs;
        std::uint64_t m = uabs_(small_);
        while (m) {
            limbs.push_back(static_cast<std::uint32_t>(m));
            m >>= 32;
        }
        return limbs;
    }

    static void trim_(std::vector<std::uint32_t>& m) {
        while (!m.empty() && m.back() == 0) m.pop_back();
    }

    static BigInt from_mag_(bool neg, std::vector<std::uint32_t> m, bool needs_trim) {
        if (needs_trim) trim_(m);
        if (m.empty()) return BigInt(0);
        if (m.size() <= 2) {
            std::uint64_t v = m[0];
            if (m.size() == 2) v |= static_cast<std::uint64_t>(m[1]) << 32;
            if (v <= static_cast<std::uint64_t>(INT64_MAX))
                return BigInt(neg ? -static_cast<long long>(v) : static_cast<long long>(v));
            if (neg && v == static_cast<std::uint64_t>(INT64_MAX) + 1u) return BigInt(INT64_MIN);
        }
        BigInt r;
        r.neg_ = neg;
        r.mag_ = std::move(m);
        return r;
    }

    static int mag_cmp_(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    // a += b on magnitudes
    static void mag_add_(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() < b.size()) a.resize(b.size(), 0);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::uint64_t cur = carry + a[i] + (i < b.size() ? b[i] : 0u);
            a[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) a.push_back(static_cast<std::uint32_t>(carry));
    }

    // a -= b on magnitudes; requires a >= b
    static void mag_sub_(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0u);
            borrow = cur < 0 ? 1 : 0;
            if (cur < 0) cur += (static_cast<std::int64_t>(1) << 32);
            a[i] = static_cast<std::uint32_t>(cur);
        }
        trim_(a);
    }

    static void shl1_(std::vector<std::uint32_t>& m) {
        std::uint32_t carry = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::uint32_t next = m[i] >> 31;
            m[i] = (m[i] << 1) | carry;
            carry = next;
        }
        if (carry) m.push_back(carry);
    }

    static BigInt add_big_(const BigInt& a, const BigInt& b, bool negate_b) {
        int sa = a.sign(), sb = b.sign() * (negate_b ? -1 : 1);
        if (sa == 0) {
            BigInt r = negate_b ? -b : b;
            return r;
        }
        if (sb == 0) return a;
        std::vector<std::uint32_t> am = a.mag_limbs_(), bm = b.mag_limbs_();
        if (sa == sb) {
            mag_add_(am, bm);
            return from_mag_(sa < 0, std::move(am), false);
        }
        int c = mag_cmp_(am, bm);
        if (c == 0) return BigInt(0);
        if (c > 0) {
            mag_sub_(am, bm);
            return from_mag_(sa < 0, std::move(am), false);
        }
        mag_sub_(bm, am);
        return from_mag_(sb < 0, std::move(bm), false);
    }
};

} // namespace setline
