#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hirz {

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Exact rational number. Values whose numerator and denominator fit in 64 bits
// are kept inline; anything larger spills into a GMP rational.
class Rational {
public:
    Rational() = default;
    Rational(long long n);                 // NOLINT(implicit)
    Rational(int n) : Rational(static_cast<long long>(n)) {}  // NOLINT(implicit)
    Rational(long n) : Rational(static_cast<long long>(n)) {}  // NOLINT(implicit)
    Rational(long long n, long long d);
    explicit Rational(const mpq_class& q);

    Rational(const Rational& o);
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o);
    Rational& operator=(Rational&&) noexcept = default;
    ~Rational() = default;

    // Accepts "p", "p/q", with optional sign. Decimal points and exponents are
    // rejected with a hint describing the exact fraction.
    static Rational parse(std::string_view s);

    std::string str() const;   // "p" when integral, else "p/q"
    mpq_class to_mpq() const;

    int sign() const;
    bool is_integer() const;
    bool is_zero() const { return sign() == 0; }
    bool fits_small() const { return !big_; }

    Rational num() const;
    Rational den() const;
    Rational floor() const;
    Rational ceil() const;
    Rational abs() const { return sign() < 0 ? -*this : *this; }
    long long to_ll() const;   // throws if not an integer in range

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    std::size_t hash() const;

private:
    static Rational from_wide(__int128 n, __int128 d);
    void normalize_big();

    long long n_ = 0;
    long long d_ = 1;
    std::unique_ptr<mpq_class> big_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational gcd_int(const Rational& a, const Rational& b);  // for integers only
std::ostream& operator<<(std::ostream& os, const Rational& q);

}  // namespace hirz

template <>
struct std::hash<hirz::Rational> {
    std::size_t operator()(const hirz::Rational& q) const noexcept { return q.hash(); }
};
