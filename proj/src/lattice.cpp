#include "hirz/lattice.hpp"

namespace hirz {

Rational intersect(const Divisor& x, const Divisor& y, int e) {
    return x.a * y.b + y.a * x.b - Rational(e) * x.a * y.a;
}

Rational hilbert_P(const Divisor& nu, int e) {
    return (nu.a + 1) * (nu.b + 1 - Rational(e, 2) * nu.a);
}

Divisor canonical(int e) { return {Rational(-2), Rational(-(e + 2))}; }

Divisor polarization(const Rational& m, int e) { return {Rational(1), Rational(e) + m}; }

Divisor Character::nu() const {
    if (r <= 0) throw std::domain_error("slope of a rank-zero character");
    return {Rational(a, r), Rational(b, r)};
}

Rational Character::disc(int e) const {
    Divisor n = nu();
    return intersect(n, n, e) / 2 - ch2 / Rational(r);
}

Rational Character::c2(int e) const {
    Divisor c = c1();
    return intersect(c, c, e) / 2 - ch2;
}

Character operator+(const Character& v, const Character& w) {
    return {v.r + w.r, v.a + w.a, v.b + w.b, v.ch2 + w.ch2};
}

Character operator-(const Character& v, const Character& w) {
    return {v.r - w.r, v.a - w.a, v.b - w.b, v.ch2 - w.ch2};
}

Character operator*(long long n, const Character& v) {
    return {n * v.r, n * v.a, n * v.b, Rational(n) * v.ch2};
}

std::string Character::str() const {
    return "(" + std::to_string(r) + "," + std::to_string(a) + "," + std::to_string(b) + "," +
           ch2.str() + ")";
}

Character line_bundle(long long s, long long t, int e) {
    Divisor L{Rational(s), Rational(t)};
    return {1, s, t, intersect(L, L, e) / 2};
}

Character from_c2(long long r, long long a, long long b, const Rational& c2, int e) {
    Divisor c{Rational(a), Rational(b)};
    return {r, a, b, intersect(c, c, e) / 2 - c2};
}

Character from_rank_slope_disc(long long r, const Divisor& nu, const Rational& Delta, int e) {
    if (r <= 0) throw std::domain_error("rank must be positive");
    Divisor c1 = Rational(r) * nu;
    if (!c1.is_integral()) throw IntegralityError("r*nu is not integral");
    Rational ch2 = Rational(r) * (intersect(nu, nu, e) / 2 - Delta);
    Character v{r, c1.a.to_ll(), c1.b.to_ll(), ch2};
    if (!v.is_integral(e)) throw IntegralityError("c2 = " + v.c2(e).str() + " is not an integer");
    return v;
}

Rational disc_offset(long long r, long long a, long long b, int e) {
    Divisor c{Rational(a), Rational(b)};
    Divisor n{Rational(a, r), Rational(b, r)};
    return intersect(n, n, e) / 2 - intersect(c, c, e) / Rational(2 * r);
}

Rational euler_char(const Character& v, int e) {
    if (v.r <= 0) throw std::domain_error("euler_char needs positive rank");
    return Rational(v.r) * (hilbert_P(v.nu(), e) - v.disc(e));
}

Rational euler_pair(const Character& v, const Character& w, int e) {
    if (v.r <= 0 || w.r <= 0) throw std::domain_error("euler_pair needs positive ranks");
    return Rational(v.r) * Rational(w.r) *
           (hilbert_P(w.nu() - v.nu(), e) - v.disc(e) - w.disc(e));
}

Rational mu(const Character& v, const Rational& m, int) {
    if (v.r <= 0) throw std::domain_error("slope of a rank-zero character");
    return (Rational(v.a) * m + Rational(v.b)) / Rational(v.r);
}

Character twist(const Character& v, long long s, long long t, int e) {
    Divisor L{Rational(s), Rational(t)};
    return {v.r, v.a + v.r * s, v.b + v.r * t,
            v.ch2 + intersect(v.c1(), L, e) + Rational(v.r) * intersect(L, L, e) / 2};
}

Character dual(const Character& v) { return {v.r, -v.a, -v.b, v.ch2}; }

HilbertKey reduced_hilbert_key(const Character& v, const Rational& m, int e) {
    return {mu(v, m, e), euler_char(v, e) / Rational(v.r)};
}

}  // namespace hirz
