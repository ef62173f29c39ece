#pragma once

#include <optional>

#include "hirz/lattice.hpp"

namespace hirz {

struct BogomolovError : std::domain_error {
    using std::domain_error::domain_error;
};

struct L0Psi {
    long long a0 = 0;   // L0 = a0 E + b0 F
    long long b0 = 0;
    long long a1 = 0;   // lattice point above the upper hyperbola branch
    long long b1 = 0;
    Rational psi;
    bool degenerate = false;   // eps integral: no restriction from the hyperbola
    bool zero_disc = false;    // Delta == 0, hyperbola degenerates to its asymptotes
};

L0Psi l0_and_psi(const Character& v, int e);

struct GaetaExponents {
    Rational alpha, beta, gamma, delta;
};

GaetaExponents gaeta_exponents(const Character& v, int e);

// Is the stack of F- and H_n-prioritary sheaves of character v nonempty?
bool prioritary_nonempty(const Character& v, long long n, int e);

// Generic prioritary index; nullopt stands for +infinity.
std::optional<long long> generic_prioritary_index(const Character& v, int e);

// Sharp discriminant bound for H_n-prioritary sheaves of slope nu.
Rational delta_p(const Divisor& nu, long long n, int e);

struct Cohomology {
    long long h0 = 0, h1 = 0, h2 = 0;
    friend bool operator==(const Cohomology&, const Cohomology&) = default;
};

// Betti numbers of a general F-prioritary sheaf of character v.
Cohomology general_cohomology(const Character& v, int e);

// Cohomology of the line bundle O(sE + tF).
Cohomology line_bundle_cohomology(long long s, long long t, int e);

}  // namespace hirz
