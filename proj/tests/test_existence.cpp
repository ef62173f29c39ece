#include <doctest.h>

#include "corpus.hpp"
#include "hirz/existence.hpp"
#include "hirz/kronecker.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "tables.hpp"

using namespace hirz;
using testing_rng::uniform;

namespace {

Rational random_m() {
    static const Rational ms[] = {Rational(1, 3), Rational(1, 2), Rational(1), Rational(3, 2), Rational(12, 7),
                                  Rational(2), Rational(5, 2), Rational(3), Rational(7, 3), Rational(1, 5)};
    return ms[uniform(0, 9)];
}

std::vector<oracle::Ch> to_oracle(const HNDecomposition& hn) {
    std::vector<oracle::Ch> out;
    for (const auto& f : hn.factors) out.push_back(oracle::from(f));
    return out;
}

Character scaled(const Character& v, long long n) { return {n * v.r, n * v.a, n * v.b, Rational(n) * v.ch2}; }

Character shift_disc(const Character& v, long long k) { return {v.r, v.a, v.b, v.ch2 - Rational(k)}; }

}  // namespace

TEST_SUITE("existence") {

TEST_CASE("two-factor filtrations just above the Kronecker walls") {
    struct Case {
        int e;
        KroneckerParams p;
        Rational mV;
        Character v, first, second;
    };
    const Case cases[] = {
        {0, {0, 3, 1, 1, 2, 15}, Rational(25, 9), from_rank_slope_disc(15, {Rational(1, 5), Rational(1, 3)}, Rational(3, 5), 0),
         from_rank_slope_disc(2, {Rational(1, 2), Rational(-1, 2)}, Rational(3, 4), 0),
         from_rank_slope_disc(13, {Rational(2, 13), Rational(6, 13)}, Rational(90, 169), 0)},
        {1, {1, 3, 1, 1, 2, 13}, Rational(12, 7), from_rank_slope_disc(13, {Rational(3, 13), Rational(6, 13)}, Rational(98, 169), 1),
         from_rank_slope_disc(2, {Rational(1, 2), Rational(0)}, Rational(5, 8), 1),
         from_rank_slope_disc(11, {Rational(2, 11), Rational(6, 11)}, Rational(65, 121), 1)},
    };
    for (const auto& c : cases) {
        auto hn = hn_generic(c.v, c.mV + Rational(1, 100), c.e);
        REQUIRE(hn);
        REQUIRE(hn->length() == 2);
        CHECK(hn->factors[0] == c.first);
        CHECK(hn->factors[1] == c.second);
        DecisionCertificate cert = moduli_nonempty(c.v, c.mV + Rational(1, 100), c.e);
        CHECK(cert.verdict == Verdict::Empty);
        CHECK_FALSE(cert.wall_flag);
        auto ch = kronecker_characters(c.p);
        CHECK(ch.v == c.v);
        CHECK(ch.k == c.first);
        CHECK(ch.l == c.second);
    }
}

TEST_CASE("small verdicts") {
    for (int e : {0, 1, 2, 5})
        for (const Rational& m : {Rational(1, 7), Rational(1), Rational(9, 2)})
            CHECK(moduli_nonempty(line_bundle(0, 0, e), m, e).verdict == Verdict::Nonempty);
    Character ex = from_rank_slope_disc(3, {Rational(1, 3), Rational(1, 3)}, Rational(4, 9), 0);
    CHECK(moduli_nonempty(ex, 1, 0).verdict == Verdict::Nonempty);
    Character bad = from_rank_slope_disc(2, {Rational(1, 2), Rational(1, 2)}, Rational(-1, 4), 0);
    CHECK(moduli_nonempty(bad, 1, 0).verdict == Verdict::BogomolovViolation);
    CHECK_THROWS_AS(hn_generic(bad, 1, 0), BogomolovError);
    CHECK_THROWS_AS(hn_generic(ex, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(hn_generic(Character{2, 1, 0, Rational(1, 3)}, 1, 0), IntegralityError);
}

TEST_CASE("rank one ladders are nonempty") {
    for (int e : {0, 1, 3})
        for (long long s = -2; s <= 2; ++s)
            for (long long k = 0; k <= 3; ++k) {
                Character v = shift_disc(line_bundle(s, -s, e), k);
                CHECK(v.disc(e) == Rational(k));
                CHECK(moduli_nonempty(v, Rational(3, 2), e).verdict == Verdict::Nonempty);
            }
}

TEST_CASE("certificates pass the independent validator") {
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        int e = static_cast<int>(uniform(0, 3));
        Character v = testing_rng::character(e, 7, 7, 3);
        Rational m = random_m();
        DecisionCertificate cert = moduli_nonempty(v, m, e);
        if (cert.verdict == Verdict::Empty) {
            REQUIRE(cert.hn);
            CHECK(cert.hn->length() >= 2);
        }
        if (cert.verdict == Verdict::Nonempty) CHECK((!cert.hn || cert.hn->length() == 1));
        auto hn = hn_generic(v, m, e);
        if (!hn) {
            CHECK(cert.verdict == Verdict::NoPrioritary);
            continue;
        }
        ++checked;
        auto why = oracle::validate_hn(oracle::from(v), to_oracle(*hn), oracle::fq(m), e);
        CHECK_MESSAGE(!why, v << " m=" << m << " e=" << e << ": " << why.value_or(""));
        for (const auto& f : hn->factors) CHECK(moduli_nonempty(f, m, e).verdict == Verdict::Nonempty);
    }
    CHECK(checked >= 200);
}

TEST_CASE("brute-force agreement on a small corpus") {
    corpus::Report rep = corpus::hn_against_brute_force({0, 1}, {Rational(1, 3), Rational(1), Rational(12, 7)}, 3, 3, 2);
    CHECK(rep.instances > 1000);
    CHECK(rep.decomposed > 100);
    for (const auto& s : rep.samples) MESSAGE(s);
    CHECK(rep.mismatches == 0);
}

TEST_CASE("multiples have multiplied filtrations") {
    int cases = 0;
    while (cases < 200) {
        int e = static_cast<int>(uniform(0, 2));
        Character v = testing_rng::character(e, 3, 4, 2);
        Rational m = random_m();
        auto hn = hn_generic(v, m, e);
        if (!hn) continue;
        ++cases;
        for (long long n : {2, 3}) {
            auto big = hn_generic(scaled(v, n), m, e);
            REQUIRE(big);
            REQUIRE(big->length() == hn->length());
            for (std::size_t i = 0; i < hn->length(); ++i) CHECK(big->factors[i] == scaled(hn->factors[i], n));
        }
    }
}

TEST_CASE("nonemptiness persists as the discriminant grows") {
    int nonempty = 0, empty = 0;
    for (int i = 0; i < 2000 && (nonempty < 200 || empty < 50); ++i) {
        int e = static_cast<int>(uniform(0, 3));
        Character v = testing_rng::character(e, 6, 6, 3);
        Rational m = random_m();
        Verdict verdict = moduli_nonempty(v, m, e).verdict;
        // Below 1/2 only semiexceptional sheaves exist, and O(E)^3 at Delta = 0
        // has no neighbour at Delta = 1/3; the ladder starts at 1/2.
        if (verdict == Verdict::Nonempty && v.disc(e) >= Rational(1, 2)) {
            ++nonempty;
            CHECK_MESSAGE(exists_above(v, m, e, 3), v << " m=" << m << " e=" << e);
        } else if (verdict == Verdict::Empty) {
            ++empty;
            Character below = shift_disc(v, -1);
            if (below.disc(e) >= Rational(1, 2))
                CHECK_MESSAGE(moduli_nonempty(below, m, e).verdict != Verdict::Nonempty, below << " m=" << m << " e=" << e);
        }
    }
    CHECK(nonempty >= 200);
}

// Gieseker semistability depends on the twist when two factors share an
// H_m-slope, so verdicts are compared only off such walls.
TEST_CASE("verdicts are invariant under twist and dual off walls") {
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        int e = static_cast<int>(uniform(0, 3));
        Character v = testing_rng::character(e, 6, 5, 3);
        Rational m = random_m();
        DecisionCertificate base = moduli_nonempty(v, m, e);
        const Character images[] = {twist(v, uniform(-2, 2), uniform(-2, 2), e), dual(v)};
        for (const auto& w : images) {
            DecisionCertificate other = moduli_nonempty(w, m, e);
            if (base.wall_flag || other.wall_flag) continue;
            ++compared;
            CHECK_MESSAGE(base.verdict == other.verdict, v << " vs " << w << " m=" << m << " e=" << e);
        }
    }
    CHECK(compared >= 400);
}

TEST_CASE("delta brackets on the Kronecker examples") {
    DeltaBracket b0 = delta_estimate({Rational(1, 5), Rational(1, 3)}, Rational(25, 9), 0, 15, &testing_tables::table(0));
    REQUIRE(b0.upper);
    CHECK(*b0.upper == Rational(3, 5));
    CHECK(b0.lower == Rational(19, 35));
    REQUIRE(b0.witness);
    CHECK(moduli_nonempty(*b0.witness, Rational(25, 9), 0).verdict == Verdict::Nonempty);

    DeltaBracket b1 = delta_estimate({Rational(3, 13), Rational(6, 13)}, Rational(12, 7), 1, 13, &testing_tables::table(1));
    REQUIRE(b1.upper);
    CHECK(*b1.upper == Rational(98, 169));
    CHECK(b1.lower == Rational(523, 1014));

    // Parallel scans give the same bracket.
    DeltaBracket par = delta_estimate({Rational(3, 13), Rational(6, 13)}, Rational(12, 7), 1, 13, &testing_tables::table(1), 4);
    CHECK(*par.upper == *b1.upper);
    CHECK(*par.witness == *b1.witness);
}

TEST_CASE("delta brackets are ordered and grow away from the anticanonical polarization") {
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        long long den = uniform(1, 3);
        Divisor nu{Rational(uniform(-3, 3), den), Rational(uniform(-3, 3), den)};
        long long cutoff = 2 * minimal_rank(nu);
        Rational m0 = Rational(2 - e, 2);
        Rational step = Rational(uniform(1, 4), 3);
        Rational m1 = m0 + step, m2 = m1 + Rational(uniform(1, 4), 3);
        DeltaBracket b1 = delta_estimate(nu, m1, e, cutoff, &testing_tables::table(e));
        DeltaBracket b2 = delta_estimate(nu, m2, e, cutoff, &testing_tables::table(e));
        REQUIRE(b1.upper);
        REQUIRE(b2.upper);
        if (!b1.wall_flag) CHECK_MESSAGE(b1.lower <= *b1.upper, nu << " m=" << m1 << " e=" << e);
        if (!b2.wall_flag) CHECK_MESSAGE(b2.lower <= *b2.upper, nu << " m=" << m2 << " e=" << e);
        if (!b1.wall_flag && !b2.wall_flag) {
            ++compared;
            CHECK_MESSAGE(*b1.upper <= *b2.upper, nu << " m=" << m1 << "," << m2 << " e=" << e);
        }
    }
    CHECK(compared >= 200);
}

}  // TEST_SUITE
