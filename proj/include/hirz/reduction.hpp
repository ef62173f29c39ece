#pragma once

#include <vector>

#include "hirz/existence.hpp"

namespace hirz {

enum class PiDirection { Down, Up };

// (r, aE + bF, ch2) -> (r, aE' + (b - a)F', ch2) going down from F_e to F_{e-2}.
Character pi_map(const Character& v, PiDirection dir = PiDirection::Down);
Divisor pi_map(const Divisor& d, PiDirection dir = PiDirection::Down);

struct ReductionStep {
    int e_from, e_to;
    Rational m_from, m_to;
};

struct ReductionTrace {
    std::vector<ReductionStep> steps;
    Character final_character;
    int final_e = 0;
    Rational final_m;
};

// Reduces (v, e, m) to e in {0,1}; H_m on F_e corresponds to H_{m+1} on F_{e-2}.
ReductionTrace reduce(const Character& v, int e, const Rational& m);

struct ReducedDecision {
    DecisionCertificate certificate;   // HN factors pulled back to F_e
    ReductionTrace trace;
};

ReducedDecision reduce_decision(const Character& v, int e, const Rational& m);

// Generic stability interval on F_e from the one (m0, m1) on F_{e-2}:
// (0, m1 - 1), or nullopt when empty.
std::optional<Interval> interval_transport(const Interval& reduced);

}  // namespace hirz
