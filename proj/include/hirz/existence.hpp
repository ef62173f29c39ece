#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hirz/exceptional.hpp"
#include "hirz/lattice.hpp"

namespace hirz {

struct HNDecomposition {
    std::vector<Character> factors;   // in order of decreasing reduced Hilbert polynomial
    Rational m;
    int e = 0;
    std::size_t length() const { return factors.size(); }
};

// Generic H_m-Harder-Narasimhan filtration of a general F-prioritary sheaf of
// character v. Returns nullopt when there are no H_{ceil m}-prioritary sheaves.
// Throws BogomolovError when Delta(v) < 0.
std::optional<HNDecomposition> hn_generic(const Character& v, const Rational& m, int e);

enum class Verdict { Nonempty, Empty, NoPrioritary, BogomolovViolation };
const char* verdict_name(Verdict v);

struct DecisionCertificate {
    Verdict verdict = Verdict::Nonempty;
    std::optional<HNDecomposition> hn;
    // Some pair of HN factors has equal H_m-slope but different total slope.
    bool wall_flag = false;
};

DecisionCertificate moduli_nonempty(const Character& v, const Rational& m, int e);

struct DeltaBracket {
    Divisor nu;
    Rational m;
    long long rank_cutoff = 0;
    Rational lower;
    std::optional<Rational> upper;        // empty when no rank <= cutoff fits nu
    std::optional<Character> witness;     // NONEMPTY character attaining upper
    bool wall_flag = false;
};

// Minimal rank r with r * nu integral.
long long minimal_rank(const Divisor& nu);

// For e in {0,1} the lower bound uses DLP below the cutoff from the table, which
// must cover ranks < rank_cutoff. For other e the table is ignored.
DeltaBracket delta_estimate(const Divisor& nu, const Rational& m, int e, long long rank_cutoff,
                            const ExceptionalTable* table, unsigned jobs = 1);

// True when v is NONEMPTY and stays NONEMPTY for Delta + k/r, k = 1..steps.
bool exists_above(const Character& v, const Rational& m, int e, int steps = 3);

// Memo statistics, for tests and diagnostics.
std::size_t hn_memo_size();
void hn_memo_clear();

}  // namespace hirz
