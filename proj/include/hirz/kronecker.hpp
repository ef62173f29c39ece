#pragma once

#include <optional>
#include <string>

#include "hirz/lattice.hpp"

namespace hirz {

// Extensions 0 -> K -> V -> L -> 0 with
//   0 -> O(E-(k-1)F)^b -> K -> O(F)^a -> 0,   0 -> O(-E-lF)^c -> O^d -> L -> 0.
struct KroneckerParams {
    int e = 0;
    long long ell = 3;
    long long a = 1, b = 1, c = 1, d = 1;

    long long k() const { return ell - e; }
    long long N() const { return 2 * (k() - 1) + e; }
    long long M() const { return 2 * (ell + 1) - e; }
};

// Sign of p + q sqrt(D) for D >= 0.
int sign_surd(const Rational& p, const Rational& q, const Rational& D);

// q in (psi_n^{-1}, psi_n) where psi_n is the larger root of x^2 - n x + 1.
bool inside_psi(const Rational& q, long long n);

// Empty when admissible, otherwise the violated condition.
std::optional<std::string> admissibility_failure(const KroneckerParams& p);

struct KroneckerCharacters {
    Character k, l, v;
};

KroneckerCharacters kronecker_characters(const KroneckerParams& p);

// Polarization where K and L have equal slope.
Rational wall_mV(const KroneckerParams& p);
Rational wall_mK(const KroneckerParams& p);   // k
Rational wall_mL(const KroneckerParams& p);   // d/c - l - 1

// Open triangle with vertices P2, P3, P4, decided by exact sign tests.
bool in_triangle_R(const Divisor& nu, int e, long long ell);

// Ratios b/a and d/c whose slopes lie where the line of slope -m through nu meets
// the two Kronecker segments.
struct KroneckerRatios {
    Rational b_over_a, d_over_c;
};
std::optional<KroneckerRatios> crossing_ratios(const Divisor& nu, const Rational& m, int e, long long ell);

// Empty when the closed form applies, otherwise the failed precondition.
std::optional<std::string> closed_form_failure(const Divisor& nu, const Rational& m, int e, long long ell);

Rational delta_closed_form(const Divisor& nu, const Rational& m, int e, long long ell);

struct KroneckerHnCheck {
    bool ok = false;
    Rational eps;   // the perturbation m_V + eps that passed
};

// Looks for the largest eps = 10^-j (j = 1..9) at which the generic HN filtration
// of v at m_V + eps is exactly (k, l).
KroneckerHnCheck kronecker_hn_check(const KroneckerParams& p);

}  // namespace hirz
