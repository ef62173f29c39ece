#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hirz/lattice.hpp"

namespace hirz {

// Rank and first Chern class of a bundle named in a certificate.
struct BundleTag {
    long long r = 0, a = 0, b = 0;
    friend bool operator==(const BundleTag&, const BundleTag&) = default;
    friend auto operator<=>(const BundleTag&, const BundleTag&) = default;
    std::string str() const;
};

// Open interval (lo, hi) of polarizations m; lo == 0 encodes the ZERO
// sentinel and an empty hi encodes infinity.
struct Interval {
    Rational lo{0};
    std::optional<Rational> hi;
    bool contains(const Rational& m) const { return lo < m && (!hi || m < *hi); }
    friend bool operator==(const Interval&, const Interval&) = default;
    std::string str() const;
};

struct ExceptionalRecord {
    Character ch;
    Interval interval;
    std::optional<BundleTag> w0;   // realizes interval.lo
    std::optional<BundleTag> w1;   // realizes interval.hi
    friend bool operator==(const ExceptionalRecord&, const ExceptionalRecord&) = default;
};

struct RejectedCharacter {
    Character ch;
    std::string reason;
};

// Every exceptional residue class (c1 mod r) up to max_rank together with its
// stability interval. Records are the canonical representatives.
struct ExceptionalTable {
    int e = 0;
    long long max_rank = 0;
    std::vector<ExceptionalRecord> classes;    // representatives with 0 <= a, b < r
    std::vector<ExceptionalRecord> records;    // canonical normalization
    std::vector<RejectedCharacter> rejected;
    std::map<std::array<long long, 3>, std::size_t> index;   // (r, a mod r, b mod r) -> classes

    // Any c1 is accepted; lookup is by residue mod r.
    const ExceptionalRecord* find_class(long long r, long long a, long long b) const;
    void add_class(const ExceptionalRecord& rec);
};

// Potentially exceptional characters of rank r in canonical normalization.
std::vector<Character> potential_characters(int e, long long rmax);
bool is_potentially_exceptional(const Character& v, int e);
Character canonical_representative(const Character& v, int e);

ExceptionalTable build_table(int e, long long rmax, unsigned jobs = 1);
// Grows an existing table in place to a larger maximal rank.
void extend_table(ExceptionalTable& table, long long rmax, unsigned jobs = 1);

bool is_exceptional(const Character& v, const ExceptionalTable& table);

enum class WallSide { Sub, Quotient };

// Stability interval of the exceptional character v using the lower-rank
// classes of the table. Sub uses chi(W,V) > 0, Quotient uses chi(V,W) > 0.
ExceptionalRecord stability_interval(const Character& v, const ExceptionalTable& table,
                                     WallSide side = WallSide::Sub);

bool is_stable_at(const ExceptionalRecord& rec, const Rational& m);

// JSON lines cache, one record per line.
void write_cache(std::ostream& os, const ExceptionalTable& table);
// Returns false when the stream does not hold a well-formed cache.
bool read_cache(std::istream& is, ExceptionalTable& table, std::string* error = nullptr);

}  // namespace hirz
