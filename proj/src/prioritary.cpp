#include "hirz/prioritary.hpp"

namespace hirz {

namespace {

void require_bogomolov(const Character& v, int e) {
    if (v.r <= 0) throw std::domain_error("rank must be positive");
    if (v.disc(e).sign() < 0) throw BogomolovError("Delta = " + v.disc(e).str() + " < 0");
}

// chi(v(-L)) / r for a rational class L, by Riemann-Roch.
Rational chi_twisted_over_r(const Character& v, const Divisor& L, int e) {
    return hilbert_P(v.nu() - L, e) - v.disc(e);
}

}  // namespace

L0Psi l0_and_psi(const Character& v, int e) {
    require_bogomolov(v, e);
    Rational eps = v.eps(), phi = v.phi(), D = v.disc(e);
    Rational gap = eps.ceil() - eps;   // in [0, 1)
    L0Psi out;
    out.degenerate = eps.is_integer();
    out.zero_disc = D.is_zero();
    out.psi = phi + Rational(e, 2) * gap - D / (1 - gap);
    out.a0 = eps.ceil().to_ll();
    out.b0 = out.psi.ceil().to_ll();
    out.a1 = out.a0 + 1;
    if (!out.degenerate) {
        // Upper branch of chi(v(-aE-bF)) = 0 at a = a1.
        Rational x = eps - Rational(out.a1);
        Rational bq = phi + 1 - Rational(e, 2) * x + D / gap;
        out.b1 = bq.floor().to_ll() + 1;
    } else {
        out.b1 = out.b0 + 1;
    }
    return out;
}

GaetaExponents gaeta_exponents(const Character& v, int e) {
    L0Psi l = l0_and_psi(v, e);
    Divisor L{Rational(l.a0), Rational(l.b0)};
    Rational r(v.r);
    auto chi = [&](long long s, long long t) {
        return r * chi_twisted_over_r(v, L + Divisor{Rational(s), Rational(t)}, e);
    };
    return {-chi(1, 1), -chi(1, 0), -chi(0, 1), chi(0, 0)};
}

bool prioritary_nonempty(const Character& v, long long n, int e) {
    if (v.r <= 0) throw std::domain_error("rank must be positive");
    if (v.disc(e).sign() < 0) return false;
    if (v.eps().is_integer()) return true;
    L0Psi l = l0_and_psi(v, e);
    Divisor L{Rational(l.a0), Rational(l.b0)};
    return chi_twisted_over_r(v, L + polarization(Rational(n), e), e).sign() <= 0;
}

std::optional<long long> generic_prioritary_index(const Character& v, int e) {
    require_bogomolov(v, e);
    Rational eps = v.eps();
    if (eps.is_integer()) return std::nullopt;
    L0Psi l = l0_and_psi(v, e);
    Rational up = eps.ceil() - eps, down = eps - eps.floor();
    Rational bound = v.disc(e) / (up * down) - Rational(e, 2) + 1 - (l.psi.ceil() - l.psi);
    return bound.floor().to_ll();
}

Rational delta_p(const Divisor& nu, long long n, int e) {
    if (nu.a.is_integer()) return Rational(0);
    Rational N(n);
    // Try nu and its dual; after an integral twist eps lies in (-1, 0) and phi
    // must land in the column of the triangle (-1,n-1), (0,0), (0,-1).
    for (int pass = 0; pass < 2; ++pass) {
        Divisor w = pass == 0 ? nu : -nu;
        Rational x = w.a - w.a.ceil();
        Rational hi = -(N - 1) * x;
        Rational lo = -1 - N * x;
        Rational y = w.b - (w.b - hi).ceil();
        if (y < lo) continue;
        Rational l1 = -x;
        Rational l3 = -((N - 1) * x + y);
        Rational l2 = 1 - l1 - l3;
        Rational value = l1 * (l2 * Rational(e + 2 * n - 2) + l3 * Rational(e + 2 * n)) / 2;
        return max(value, Rational(0));
    }
    throw std::logic_error("slope " + nu.str() + " not covered by the prioritary triangles");
}

Cohomology line_bundle_cohomology(long long s, long long t, int e) {
    auto h0 = [e](long long s0, long long t0) -> long long {
        if (s0 < 0) return 0;
        long long total = 0;
        for (long long i = 0; i <= s0; ++i) total += std::max<long long>(t0 - i * e + 1, 0);
        return total;
    };
    Cohomology c;
    c.h0 = h0(s, t);
    c.h2 = h0(-2 - s, -e - 2 - t);
    long long chi = hilbert_P({Rational(s), Rational(t)}, e).to_ll();
    c.h1 = c.h0 + c.h2 - chi;
    return c;
}

Cohomology general_cohomology(const Character& v, int e) {
    require_bogomolov(v, e);
    if (!v.is_integral(e)) throw IntegralityError("general_cohomology needs an integral character");
    long long chi = euler_char(v, e).to_ll();
    if (v.r == 1) {
        // L tensor the ideal of c2 general points.
        Cohomology lb = line_bundle_cohomology(v.a, v.b, e);
        long long pts = v.c2(e).to_ll();
        Cohomology c;
        c.h2 = lb.h2;
        c.h0 = std::max<long long>(lb.h0 - pts, 0);
        c.h1 = c.h0 + c.h2 - chi;
        return c;
    }
    Rational eps = v.eps();
    if (eps == Rational(-1)) return {0, -chi, 0};
    if (eps < Rational(-1)) {
        Divisor K = canonical(e);
        Character w = twist(dual(v), K.a.to_ll(), K.b.to_ll(), e);
        Cohomology d = general_cohomology(w, e);
        return {d.h2, d.h1, d.h0};
    }
    Rational nuE = v.phi() - Rational(e) * eps;
    Cohomology c;
    if (nuE >= Rational(-1)) {
        if (chi >= 0) c.h0 = chi;
        else c.h1 = -chi;
        return c;
    }
    Character w = twist(v, -1, 0, e);
    c.h0 = w.eps() <= Rational(-1) ? 0 : general_cohomology(w, e).h0;
    c.h1 = c.h0 - chi;
    return c;
}

}  // namespace hirz
