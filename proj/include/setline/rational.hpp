#pragma once

// Exact rational arithmetic. Every value is kept in canonical form
// (denominator >= 1, gcd(|num|, den) == 1); no operation ever rounds.

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

#include "setline/bigint.hpp"

namespace setline {

class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long v) : num_(v), den_(1) {}
    Rat(int v) : num_(v), den_(1) {}
    Rat(BigInt v) : num_(std::move(v)), den_(1) {}

    Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { reduce_(); }
    Rat(long long num, long long den) : num_(num), den_(den) { reduce_(); }

    // Accepts "p", "p/q", with optional leading '-'.
    static Rat parse(std::string_view s) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return Rat(BigInt::parse(s), BigInt(1));
        return Rat(BigInt::parse(s.substr(0, slash)), BigInt::parse(s.substr(slash + 1)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == BigInt(1); }
    int sign() const { return num_.sign(); }

    friend Rat operator-(const Rat& a) { return Rat::raw_(-a.num_, a.den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        // Canonical form makes cross-multiplication safe, and the common
        // all-small case fits a 128-bit product exactly.
        if (a.num_.fits_int64() && a.den_.fits_int64() && b.num_.fits_int64() && b.den_.fits_int64()) {
            __int128 lhs = static_cast<__int128>(a.num_.as_int64()) * b.den_.as_int64();
            __int128 rhs = static_cast<__int128>(b.num_.as_int64()) * a.den_.as_int64();
            return lhs <=> rhs;
        }
        return (a.num_ * b.den_) <=> (b.num_ * a.den_);
    }

    friend Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }

    friend Rat pow(const Rat& base, unsigned long long e) {
        return Rat::raw_(pow(base.num_, e), pow(base.den_, e));
    }

    // Largest integer <= value.
    BigInt floor() const {
        BigInt q, r;
        divmod(num_, den_, q, r);
        if (num_.sign() < 0 && !r.is_zero()) q -= BigInt(1);
        return q;
    }

    // Smallest integer >= value.
    BigInt ceil() const {
        BigInt q, r;
        divmod(num_, den_, q, r);
        if (num_.sign() > 0 && !r.is_zero()) q += BigInt(1);
        return q;
    }

    std::string to_string() const {
        if (is_integer()) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    BigInt num_, den_;

    static Rat raw_(BigInt n, BigInt d) {
        Rat r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }

    void reduce_() {
        if (den_.is_zero()) throw std::domain_error("Rat: zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = gcd(num_, den_);
        if (!(g == BigInt(1))) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

// Exact gcd of two positive rationals: the largest rational dividing both.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    BigInt n = gcd(a.num() * b.den(), b.num() * a.den());
    return Rat(n, a.den() * b.den());
}

} // namespace setline
