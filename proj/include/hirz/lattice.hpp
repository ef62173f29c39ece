#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <utility>

#include "hirz/rational.hpp"

namespace hirz {

struct IntegralityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Class aE + bF in Pic(F_e) (x) Q.
struct Divisor {
    Rational a;
    Rational b;

    friend Divisor operator+(const Divisor& x, const Divisor& y) { return {x.a + y.a, x.b + y.b}; }
    friend Divisor operator-(const Divisor& x, const Divisor& y) { return {x.a - y.a, x.b - y.b}; }
    Divisor operator-() const { return {-a, -b}; }
    friend Divisor operator*(const Rational& s, const Divisor& x) { return {s * x.a, s * x.b}; }
    friend bool operator==(const Divisor&, const Divisor&) = default;
    bool is_integral() const { return a.is_integer() && b.is_integer(); }
    std::string str() const { return "(" + a.str() + "," + b.str() + ")"; }
};

Rational intersect(const Divisor& x, const Divisor& y, int e);
Rational hilbert_P(const Divisor& nu, int e);   // (a+1)(b+1-ea/2)
Divisor canonical(int e);                       // K = -2E-(e+2)F
Divisor polarization(const Rational& m, int e); // H_m = E+(e+m)F

// Chern character (r, c1 = aE+bF, ch2). c1 is integral by construction; ch2 is
// kept exactly so that (r, nu, Delta) are derived views.
struct Character {
    long long r = 0;
    long long a = 0;
    long long b = 0;
    Rational ch2;

    Divisor c1() const { return {Rational(a), Rational(b)}; }
    Divisor nu() const;
    Rational eps() const { return Rational(a, r); }   // nu . F
    Rational phi() const { return Rational(b, r); }   // nu . E + e nu . F
    Rational disc(int e) const;
    Rational c2(int e) const;
    bool is_integral(int e) const { return c2(e).is_integer(); }

    friend Character operator+(const Character& v, const Character& w);
    friend Character operator-(const Character& v, const Character& w);
    friend Character operator*(long long n, const Character& v);
    friend bool operator==(const Character&, const Character&) = default;

    std::string str() const;
};

Character line_bundle(long long s, long long t, int e);
Character from_c2(long long r, long long a, long long b, const Rational& c2, int e);
// Integral character with rank r, slope nu and discriminant Delta.
Character from_rank_slope_disc(long long r, const Divisor& nu, const Rational& Delta, int e);
// Rational lattice offset: Delta takes values in offset + (1/r)Z for the given (r, c1).
Rational disc_offset(long long r, long long a, long long b, int e);

Rational euler_char(const Character& v, int e);
Rational euler_pair(const Character& v, const Character& w, int e);
Rational mu(const Character& v, const Rational& m, int e);
Character twist(const Character& v, long long s, long long t, int e);
Character dual(const Character& v);

struct HilbertKey {
    Rational mu;
    Rational chi_over_r;
    friend bool operator==(const HilbertKey&, const HilbertKey&) = default;
    friend std::strong_ordering operator<=>(const HilbertKey& x, const HilbertKey& y) {
        if (auto c = x.mu <=> y.mu; c != 0) return c;
        return x.chi_over_r <=> y.chi_over_r;
    }
};

HilbertKey reduced_hilbert_key(const Character& v, const Rational& m, int e);

}  // namespace hirz
