#pragma once

// Exact rationals over a pluggable integer type, plus an overflow-checked
// int64 for bounded hot loops.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gasket {

using BigInt = boost::multiprecision::cpp_int;

class overflow_error : public std::overflow_error {
public:
    overflow_error() : std::overflow_error("checked int64 overflow") {}
};

/// int64 whose arithmetic throws on overflow.
class CheckedInt {
public:
    constexpr CheckedInt(std::int64_t v = 0) : v_(v) {}
    std::int64_t value() const { return v_; }

    friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
        std::int64_t r;
        if (__builtin_add_overflow(a.v_, b.v_, &r)) throw overflow_error();
        return r;
    }
    friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
        std::int64_t r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw overflow_error();
        return r;
    }
    friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw overflow_error();
        return r;
    }
    friend CheckedInt operator/(CheckedInt a, CheckedInt b) { return a.v_ / b.v_; }
    friend CheckedInt operator%(CheckedInt a, CheckedInt b) { return a.v_ % b.v_; }
    CheckedInt operator-() const { return CheckedInt(0) - *this; }
    CheckedInt& operator+=(CheckedInt o) { return *this = *this + o; }
    CheckedInt& operator-=(CheckedInt o) { return *this = *this - o; }
    CheckedInt& operator*=(CheckedInt o) { return *this = *this * o; }
    CheckedInt& operator/=(CheckedInt o) { return *this = *this / o; }
    friend auto operator<=>(CheckedInt, CheckedInt) = default;
    friend bool operator==(CheckedInt, CheckedInt) = default;
    explicit operator double() const { return double(v_); }
    friend CheckedInt gcd(CheckedInt a, CheckedInt b) { return std::gcd(a.v_, b.v_); }
    friend CheckedInt abs(CheckedInt a) { return a.v_ < 0 ? -a : a; }
    friend std::ostream& operator<<(std::ostream& os, CheckedInt a) { return os << a.v_; }

private:
    std::int64_t v_;
};

namespace detail {

template <class Int>
Int int_gcd(const Int& a, const Int& b) {
    using std::gcd;
    using boost::multiprecision::gcd;
    return gcd(a, b);
}

template <class Int>
double int_to_double(const Int& a) {
    return static_cast<double>(a);
}

}  // namespace detail

/// Reduced p/q with q > 0.
template <class Int>
class basic_fraction {
public:
    basic_fraction() : p_(0), q_(1) {}
    basic_fraction(Int p) : p_(std::move(p)), q_(1) {}
    basic_fraction(Int p, Int q) : p_(std::move(p)), q_(std::move(q)) { normalize(); }
    basic_fraction(int p) : p_(p), q_(1) {}
    basic_fraction(int p, int q) : p_(p), q_(q) { normalize(); }

    const Int& num() const { return p_; }
    const Int& den() const { return q_; }

    friend basic_fraction operator+(const basic_fraction& a, const basic_fraction& b) {
        return {a.p_ * b.q_ + b.p_ * a.q_, a.q_ * b.q_};
    }
    friend basic_fraction operator-(const basic_fraction& a, const basic_fraction& b) {
        return {a.p_ * b.q_ - b.p_ * a.q_, a.q_ * b.q_};
    }
    friend basic_fraction operator*(const basic_fraction& a, const basic_fraction& b) {
        return {a.p_ * b.p_, a.q_ * b.q_};
    }
    friend basic_fraction operator/(const basic_fraction& a, const basic_fraction& b) {
        if (b.p_ == Int(0)) throw std::domain_error("division by zero fraction");
        return {a.p_ * b.q_, a.q_ * b.p_};
    }
    basic_fraction operator-() const { return {Int(-p_), q_}; }

    friend bool operator==(const basic_fraction& a, const basic_fraction& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
    friend bool operator<(const basic_fraction& a, const basic_fraction& b) { return a.p_ * b.q_ < b.p_ * a.q_; }
    friend bool operator>(const basic_fraction& a, const basic_fraction& b) { return b < a; }
    friend bool operator<=(const basic_fraction& a, const basic_fraction& b) { return !(b < a); }
    friend bool operator>=(const basic_fraction& a, const basic_fraction& b) { return !(a < b); }

    /// (p + r) / (q + s)
    friend basic_fraction mediant(const basic_fraction& a, const basic_fraction& b) {
        return {a.p_ + b.p_, a.q_ + b.q_};
    }

    /// Value reduced into [0, 1).
    basic_fraction mod1() const {
        Int r = p_ % q_;
        if (r < Int(0)) r += q_;
        return {r, q_};
    }

    double to_double() const { return detail::int_to_double(p_) / detail::int_to_double(q_); }

    friend std::ostream& operator<<(std::ostream& os, const basic_fraction& f) {
        os << f.p_;
        if (!(f.q_ == Int(1))) os << "/" << f.q_;
        return os;
    }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

private:
    void normalize() {
        if (q_ == Int(0)) throw std::domain_error("zero denominator");
        if (q_ < Int(0)) {
            p_ = -p_;
            q_ = -q_;
        }
        Int g = detail::int_gcd(p_ < Int(0) ? Int(-p_) : p_, q_);
        if (!(g == Int(1)) && !(g == Int(0))) {
            p_ /= g;
            q_ /= g;
        }
    }

    Int p_, q_;
};

using Fraction = basic_fraction<BigInt>;

}  // namespace gasket
