#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace slsh {

/// Non-negative rational, kept in lowest terms.
class Rational {
public:
    Rational() : num_(0), den_(1) {}

    Rational(std::int64_t num, std::int64_t den) {
        if (num < 0) throw std::invalid_argument("rational: negative numerator");
        if (den <= 0) throw std::invalid_argument("rational: non-positive denominator");
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    static Rational from_integer(std::int64_t n) { return Rational(n, 1); }

    /// Parses "a/b" or a bare integer "a".
    static Rational parse(const std::string& text) {
        const auto slash = text.find('/');
        try {
            if (slash == std::string::npos)
                return Rational(std::stoll(text), 1);
            return Rational(std::stoll(text.substr(0, slash)),
                            std::stoll(text.substr(slash + 1)));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("rational: cannot parse '" + text + "'");
        }
    }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator+(const Rational& o) const {
        return Rational(checked_mul(num_, o.den_) + checked_mul(o.num_, den_),
                        checked_mul(den_, o.den_));
    }
    Rational operator*(const Rational& o) const {
        return Rational(checked_mul(num_, o.num_), checked_mul(den_, o.den_));
    }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator<(const Rational& o) const {
        return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        const __int128 wide = static_cast<__int128>(a) * b;
        if (wide > INT64_MAX || wide < 0)
            throw std::overflow_error("rational: 64-bit overflow");
        return static_cast<std::int64_t>(wide);
    }

private:
    std::int64_t num_;
    std::int64_t den_;
};

/// lcm with overflow detection.
inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    const std::int64_t g = std::gcd(a, b);
    return Rational::checked_mul(a / g, b);
}

}  // namespace slsh
