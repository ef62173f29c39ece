#include "hirz/reduction.hpp"

namespace hirz {

Character pi_map(const Character& v, PiDirection dir) {
    long long b = dir == PiDirection::Down ? v.b - v.a : v.b + v.a;
    return {v.r, v.a, b, v.ch2};
}

Divisor pi_map(const Divisor& d, PiDirection dir) {
    return {d.a, dir == PiDirection::Down ? d.b - d.a : d.b + d.a};
}

ReductionTrace reduce(const Character& v, int e, const Rational& m) {
    if (e < 0) throw std::invalid_argument("e must be nonnegative");
    ReductionTrace t{{}, v, e, m};
    while (t.final_e >= 2) {
        t.steps.push_back({t.final_e, t.final_e - 2, t.final_m, t.final_m + 1});
        t.final_character = pi_map(t.final_character, PiDirection::Down);
        t.final_e -= 2;
        t.final_m = t.final_m + 1;
    }
    return t;
}

ReducedDecision reduce_decision(const Character& v, int e, const Rational& m) {
    if (m.sign() <= 0) throw std::invalid_argument("polarization parameter m must be positive");
    ReducedDecision out{{}, reduce(v, e, m)};
    out.certificate = moduli_nonempty(out.trace.final_character, out.trace.final_m, out.trace.final_e);
    if (out.certificate.hn) {
        HNDecomposition& hn = *out.certificate.hn;
        for (auto& f : hn.factors)
            for (std::size_t s = 0; s < out.trace.steps.size(); ++s) f = pi_map(f, PiDirection::Up);
        hn.m = m;
        hn.e = e;
    }
    return out;
}

std::optional<Interval> interval_transport(const Interval& reduced) {
    if (!reduced.hi) return Interval{Rational(0), std::nullopt};
    Rational hi = *reduced.hi - 1;
    if (hi.sign() <= 0) return std::nullopt;
    return Interval{Rational(0), hi};
}

}  // namespace hirz
