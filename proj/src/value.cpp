#include "holant/value.hpp"

#include "holant/errors.hpp"

#include <cctype>
#include <ostream>

namespace holant {

Value& Value::operator+=(const Value& o)
{
    re_ += o.re_;
    if (sgn(o.im_) != 0)
        im_ += o.im_;
    return *this;
}

Value& Value::operator-=(const Value& o)
{
    re_ -= o.re_;
    if (sgn(o.im_) != 0)
        im_ -= o.im_;
    return *this;
}

Value& Value::operator*=(const Value& o)
{
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Value& Value::operator/=(const Value& o)
{
    if (o.is_zero())
        throw InvalidArgument("division by zero value");
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ /= o.re_;
        return *this;
    }
    Rational den = o.re_ * o.re_ + o.im_ * o.im_;
    Rational re = (re_ * o.re_ + im_ * o.im_) / den;
    Rational im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

namespace {

std::size_t hash_mpz(mpz_srcptr z)
{
    std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) * 0x9e3779b97f4a7c15ULL;
    const std::size_t n = mpz_size(z);
    for (std::size_t i = 0; i < n; ++i)
        h = (h ^ static_cast<std::size_t>(mpz_getlimbn(z, i))) * 0x100000001b3ULL;
    return h;
}

} // namespace

std::size_t hash_rational(const Rational& r)
{
    return hash_mpz(r.get_num_mpz_t()) * 31 + hash_mpz(r.get_den_mpz_t());
}

std::size_t Value::hash() const
{
    return hash_rational(re_) * 1000003ULL ^ hash_rational(im_);
}

std::string rational_to_string(const Rational& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string Value::to_string() const
{
    if (is_real())
        return rational_to_string(re_);
    std::string s;
    if (sgn(re_) != 0) {
        s = rational_to_string(re_);
        if (sgn(im_) > 0)
            s += "+";
    }
    s += rational_to_string(im_) + "i";
    return s;
}

std::ostream& operator<<(std::ostream& os, const Value& v) { return os << v.to_string(); }

Rational parse_rational(std::string_view text)
{
    auto fail = [&] { return InvalidArgument("malformed rational '" + std::string(text) + "'"); };
    if (text.empty())
        throw fail();
    std::string t(text);
    bool negative = false;
    std::size_t pos = 0;
    if (t[0] == '+' || t[0] == '-') {
        negative = t[0] == '-';
        pos = 1;
    }
    std::string body = t.substr(pos);
    if (body.empty())
        throw fail();
    Rational r;
    const auto slash = body.find('/');
    const auto dot = body.find('.');
    auto all_digits = [](const std::string& s) {
        if (s.empty())
            return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return false;
        return true;
    };
    if (slash != std::string::npos) {
        std::string num = body.substr(0, slash), den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw fail();
        mpz_class d(den);
        if (d == 0)
            throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
        r = Rational(mpz_class(num), d);
    } else if (dot != std::string::npos) {
        std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
            throw fail();
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        r = Rational(mpz_class(ip.empty() ? "0" : ip) * scale + mpz_class(fp.empty() ? "0" : fp), scale);
    } else {
        if (!all_digits(body))
            throw fail();
        r = Rational(mpz_class(body));
    }
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

Value Value::parse(std::string_view text)
{
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t.empty())
        throw InvalidArgument("empty value literal");
    if (t.back() != 'i')
        return Value(parse_rational(t));
    t.pop_back();
    // Split at the last sign that is not the leading one.
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if (t[k] == '+' || t[k] == '-') {
            split = k;
            break;
        }
    if (split == std::string::npos) {
        if (t.empty() || t == "+" || t == "-")
            return Value(Rational(0), Rational(t == "-" ? -1 : 1));
        return Value(Rational(0), parse_rational(t));
    }
    std::string re = t.substr(0, split), im = t.substr(split);
    if (im == "+" || im == "-")
        im += "1";
    return Value(parse_rational(re), parse_rational(im));
}

Value pow(const Value& base, unsigned exponent)
{
    Value result(1);
    Value b = base;
    while (exponent) {
        if (exponent & 1u)
            result *= b;
        exponent >>= 1;
        if (exponent)
            b *= b;
    }
    return result;
}

} // namespace holant
