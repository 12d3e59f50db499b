#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

namespace holant {

using Rational = mpq_class;

/// Exact Gaussian-rational scalar `re + im*i`. All Holant arithmetic runs on
/// this type; real-valued instances simply keep `im == 0`.
class Value {
public:
    Value() = default;
    Value(long v) : re_(v) {}
    Value(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
    Value(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    Value& operator+=(const Value& o);
    Value& operator-=(const Value& o);
    Value& operator*=(const Value& o);
    Value& operator/=(const Value& o);

    friend Value operator+(Value a, const Value& b) { return a += b; }
    friend Value operator-(Value a, const Value& b) { return a -= b; }
    friend Value operator*(Value a, const Value& b) { return a *= b; }
    friend Value operator/(Value a, const Value& b) { return a /= b; }
    Value operator-() const { return Value(-re_, -im_); }

    friend bool operator==(const Value& a, const Value& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

    std::size_t hash() const;

    /// `a/b` for reals, `a/b+c/di` otherwise (integers drop the `/1`).
    std::string to_string() const;

    /// Accepts `a`, `a/b`, `a/b+c/d i`, `a/b-c/d i`, `c/d i` and decimal
    /// literals such as `1.25` (converted exactly).
    static Value parse(std::string_view text);

private:
    Rational re_{0};
    Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const Value& v);

/// Parses `a`, `a/b` or a finite decimal literal into an exact rational.
Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& r);

std::size_t hash_rational(const Rational& r);

Value pow(const Value& base, unsigned exponent);

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.hash(); }
};

} // namespace holant
