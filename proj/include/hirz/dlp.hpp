#pragma once

#include <optional>
#include <vector>

#include "hirz/exceptional.hpp"

namespace hirz {

struct DlpValue {
    std::optional<Rational> value;      // empty: no contributor (negative infinity)
    std::optional<Character> witness;   // twisted exceptional character attaining value
    bool equal_slope_hit = false;       // witness used the equal-slope branch off nu(V)

    bool is_neg_infinity() const { return !value.has_value(); }
};

// DLP_{H_m,V}(nu); empty when nu lies outside the strip |(nu - nu(V)).H_m| <= -K.H_m / 2.
std::optional<Rational> dlp_single(const Character& V, const Divisor& nu, const Rational& m,
                                   int e);

DlpValue dlp_line_bundles(const Divisor& nu, const Rational& m, int e);

// Maximum over twists of table classes of rank < r that are mu_{H_m}-stable.
DlpValue dlp_below_rank(const Divisor& nu, const Rational& m, int e, long long r,
                        const ExceptionalTable& table);

// Same maximum computed over an explicit list of contributors, ignoring stability.
DlpValue dlp_over(const Divisor& nu, const Rational& m, int e,
                  const std::vector<const ExceptionalRecord*>& contributors);

struct Square {
    Rational eps0, eps1, phi0, phi1;
};

struct GridPoint {
    Rational eps, phi;
    DlpValue value;
};

// Row-major (steps+1) x (steps+1) grid; rows vary phi, columns vary eps.
std::vector<GridPoint> dlp_grid(int e, const Rational& m, const Square& sq, long long steps,
                                long long rank_cutoff, const ExceptionalTable& table,
                                unsigned jobs = 1);

}  // namespace hirz
