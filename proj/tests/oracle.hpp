#pragma once

// Reference implementations used to cross-check the library. They re-derive
// every formula locally on a separate fraction type; the only library calls are
// the prioritary test (an input to the decomposition theorem) and conversions.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "hirz/exceptional.hpp"
#include "hirz/lattice.hpp"

namespace oracle {

// Reduced fraction over int64 with 128-bit intermediates; throws
// std::overflow_error instead of wrapping. Independent of hirz::Rational.
struct Q {
    long long n = 0, d = 1;
    Q() = default;
    Q(long long num, long long den = 1);
    static Q reduce(__int128 num, __int128 den);
    friend bool operator==(const Q&, const Q&) = default;
    friend std::strong_ordering operator<=>(const Q& x, const Q& y) {
        return static_cast<__int128>(x.n) * y.d <=> static_cast<__int128>(y.n) * x.d;
    }
    Q operator-() const { return {-n, d}; }
    friend Q operator+(const Q& x, const Q& y) {
        return reduce(static_cast<__int128>(x.n) * y.d + static_cast<__int128>(y.n) * x.d, static_cast<__int128>(x.d) * y.d);
    }
    friend Q operator-(const Q& x, const Q& y) { return x + (-y); }
    friend Q operator*(const Q& x, const Q& y) {
        return reduce(static_cast<__int128>(x.n) * y.n, static_cast<__int128>(x.d) * y.d);
    }
    friend Q operator/(const Q& x, const Q& y);
    Q& operator+=(const Q& y) { return *this = *this + y; }
    Q& operator-=(const Q& y) { return *this = *this - y; }
    long long floor() const;
    long long ceil() const { return -Q(-n, d).floor(); }
    std::string str() const;
};

inline Q abs(const Q& x) { return x.n < 0 ? -x : x; }

struct Ch {
    long r = 0, a = 0, b = 0;
    Q ch2;
    friend bool operator==(const Ch&, const Ch&) = default;
};

// GMP reference for arithmetic checks.
mpq_class q(const hirz::Rational& x);
Q fq(const hirz::Rational& x);
hirz::Rational back(const Q& x);
Ch from(const hirz::Character& v);
hirz::Character to(const Ch& v);

Q P(const Q& x, const Q& y, int e);
Q sq(const Q& x, const Q& y, int e);   // (xE+yF)^2
Q disc(const Ch& v, int e);
Q chi(const Ch& v, const Ch& w, int e);
Q mu(const Ch& v, const Q& m);
bool integral(const Ch& v, int e);
Ch with_disc(long r, long a, long b, const Q& D, int e);
Ch twist(const Ch& v, long s, long t, int e);

// Checks the decomposition conditions on a proposed HN list; returns a reason
// on failure. Semistability of the factors is left to the caller.
std::optional<std::string> validate_hn(const Ch& v, const std::vector<Ch>& factors, const Q& m, int e);

// Exhaustive search over every decomposition of length 2..4 satisfying the
// conditions, with factor semistability decided recursively by the same search.
class BruteHN {
public:
    BruteHN(int e, const Q& m) : e_(e), m_(m) {}
    struct Result {
        bool no_prioritary = false;
        bool semistable = false;                 // no decomposition and prioritary one step up
        std::vector<std::vector<Ch>> decompositions;
    };
    Result solve(const Ch& v);

private:
    bool semistable(const Ch& v);
    // Rank and c1 of every ordered factor list compatible with the slope
    // conditions; depends on v only through (r, a, b).
    void search(const Ch& v, std::vector<Ch>& slopes, long rem_r, long rem_a, long rem_b,
                std::vector<std::vector<Ch>>& out);
    void fill_discs(const Ch& v, std::vector<Ch>& f, std::size_t i, const Q& budget,
                    std::vector<std::vector<Ch>>& out);
    int e_;
    Q m_;
    std::map<std::tuple<long, long, long, long long, long long>, Result> memo_;
    struct Tuple {
        std::vector<Ch> factors;
        Q cross;   // slope part of the discriminant budget
    };
    std::map<std::tuple<long, long, long>, std::vector<Tuple>> tuples_;
};

// DLP over the exceptional classes of rank < r stable at m, scanning a twist box
// much larger than needed; the strip condition is the definition.
std::optional<Q> dlp_brute(const hirz::Divisor& nu, const Q& m, int e, long r,
                                   const hirz::ExceptionalTable& table, long pad = 6);

}  // namespace oracle
