#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nilinv {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Exact rational scalar. Always reduced to lowest terms, denominator > 0.
/// Arithmetic never rounds; division by zero throws std::domain_error.
/// Immutable value type, safe to share across threads.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long long n) : v_(n) {}
    Rational(const BigInt& n) : v_(n) {}
    Rational(long long num, long long den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = BigRat(BigInt(num), BigInt(den));
    }
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = BigRat(num, den);
    }

    /// Parses "p", "-p", or "p/q". Whitespace is not accepted.
    static Rational parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
        const auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos) {
                check_integer_text(s);
                return Rational(BigInt(std::string(s)));
            }
            std::string_view num = s.substr(0, slash);
            std::string_view den = s.substr(slash + 1);
            check_integer_text(num);
            check_integer_text(den);
            BigInt d{std::string(den)};
            if (d == 0) throw std::domain_error("Rational::parse: zero denominator");
            return Rational(BigInt(std::string(num)), d);
        } catch (const std::runtime_error& e) {
            throw std::invalid_argument("Rational::parse: bad literal '" + std::string(s) + "'");
        }
    }

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return v_.sign(); }

    Rational operator-() const { return Rational(BigRat(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    Rational pow(unsigned e) const {
        Rational base = *this, acc = 1;
        while (e > 0) {
            if (e & 1u) acc *= base;
            base *= base;
            e >>= 1u;
        }
        return acc;
    }

    double to_double() const { return v_.convert_to<double>(); }

    /// "p/q", or just "p" when integral.
    std::string str() const {
        std::string s = numerator().str();
        if (!is_integer()) s += "/" + denominator().str();
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    explicit Rational(BigRat v) : v_(std::move(v)) {}

    static void check_integer_text(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("Rational::parse: empty integer");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw std::invalid_argument("Rational::parse: sign only");
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("Rational::parse: bad digit");
    }

    BigRat v_;
};

} // namespace nilinv
