#include <doctest.h>

#include <set>

#include "hirz/dlp.hpp"
#include "oracle.hpp"
#include "random.hpp"
#include "tables.hpp"

using namespace hirz;
using testing_rng::uniform;

namespace {

using testing_tables::table;

// -inf compares below everything.
bool leq(const DlpValue& x, const DlpValue& y) { return !x.value || (y.value && *x.value <= *y.value); }

Divisor random_slope(long den = 12) { return {testing_rng::rational(2 * den, den), testing_rng::rational(2 * den, den)}; }

Rational random_m(int e) {
    Rational m = Rational(uniform(1, 40), uniform(1, 10));
    return m - Rational(e, 2) > 0 ? m : m + 1;
}

}  // namespace

TEST_SUITE("dlp") {

TEST_CASE("single-bundle branches") {
    CHECK(dlp_single(line_bundle(0, 0, 0), {0, 0}, 1, 0) == Rational(1));
    CHECK_FALSE(dlp_single(line_bundle(0, 0, 0), {0, 100}, 1, 0).has_value());
    // At -K the two branches agree when (nu - nu(V)).K = 0.
    for (int i = 0; i < 200; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        Rational x = testing_rng::rational(12, 6);
        // (xE + yF).K = (e - 2)x - 2y.
        Rational y = Rational(e - 2) * x / 2;
        Divisor d{x, y};
        CHECK(intersect(d, canonical(e), e) == 0);
        CHECK(hilbert_P(d, e) == hilbert_P(-d, e));
    }
    Character V2 = from_rank_slope_disc(2, {Rational(1, 2), Rational(1, 2)}, Rational(3, 8), 1);
    DlpValue lb = dlp_line_bundles({Rational(1, 2), Rational(1, 2)}, Rational(1, 2), 1);
    CHECK(lb.value == Rational(3, 8));
    CHECK(lb.value == V2.disc(1));
}

TEST_CASE("line bundle bound examples") {
    DlpValue o = dlp_line_bundles({0, 0}, 1, 0);
    CHECK(o.value == Rational(1));
    CHECK(o.witness == line_bundle(0, 0, 0));
}

TEST_CASE("line bundle bound is at least 3/8 at the anticanonical polarization") {
    for (int e : {0, 1}) {
        Rational m = 1 - Rational(e, 2);
        for (long i = 0; i < 50; ++i)
            for (long j = 0; j < 50; ++j) {
                DlpValue v = dlp_line_bundles({Rational(i, 50), Rational(j, 50)}, m, e);
                REQUIRE(v.value);
                CHECK(*v.value >= Rational(3, 8));
            }
    }
}

TEST_CASE("worked values below a rank") {
    DlpValue a = dlp_below_rank({Rational(1, 5), Rational(1, 3)}, Rational(25, 9), 0, 15, table(0));
    CHECK(a.value == Rational(19, 35));
    DlpValue b = dlp_below_rank({Rational(3, 13), Rational(6, 13)}, Rational(12, 7), 1, 13, table(1));
    CHECK(b.value == Rational(523, 1014));
    for (int i = 0; i < 100; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        Divisor nu = random_slope();
        Rational m = random_m(e);
        DlpValue x = dlp_below_rank(nu, m, e, 2, table(e)), y = dlp_line_bundles(nu, m, e);
        CHECK(x.value == y.value);
    }
    CHECK_THROWS_AS(dlp_below_rank({0, 0}, 1, 0, 40, table(0)), std::invalid_argument);
    CHECK_THROWS_AS(dlp_below_rank({0, 0}, 1, 2, 4, table(0)), std::invalid_argument);
    CHECK_THROWS_AS(dlp_below_rank({0, 0}, 1, 1, 4, table(0)), std::invalid_argument);
}

TEST_CASE("contributor ranks on the figure squares") {
    for (auto [e, cutoff, expect] : {std::tuple{0, 8L, std::set<long long>{1, 3, 5, 7}},
                                     std::tuple{1, 7L, std::set<long long>{1, 2, 4, 5, 6}}}) {
        Rational m = 1 - Rational(e, 2);
        std::set<long long> ranks;
        for (const auto& c : table(e).classes)
            if (c.ch.r < cutoff && is_stable_at(c, m)) ranks.insert(c.ch.r);
        CHECK(ranks == expect);
        std::set<long long> used;
        for (const auto& p : dlp_grid(e, m, {0, 1, 0, 1}, 24, cutoff, table(e), 4))
            if (p.value.witness) used.insert(p.value.witness->r);
        for (long long r : used) CHECK(expect.count(r) == 1);
    }
}

TEST_CASE("grid layout") {
    auto g = dlp_grid(0, 1, {0, 1, 0, 1}, 3, 8, table(0));
    REQUIRE(g.size() == 16);
    CHECK(g[1].eps == Rational(1, 3));
    CHECK(g[1].phi == 0);
    CHECK(g[4].eps == 0);
    CHECK(g[4].phi == Rational(1, 3));
    auto one = dlp_grid(1, Rational(3, 2), {Rational(1, 7), 1, Rational(2, 7), 1}, 0, 9, table(1));
    REQUIRE(one.size() == 1);
    CHECK(one[0].value.value == dlp_below_rank({Rational(1, 7), Rational(2, 7)}, Rational(3, 2), 1, 9, table(1)).value);
    auto threaded = dlp_grid(0, 1, {0, 1, 0, 1}, 9, 8, table(0), 5);
    auto serial = dlp_grid(0, 1, {0, 1, 0, 1}, 9, 8, table(0), 1);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(threaded[i].value.value == serial[i].value.value);
}

TEST_CASE("monotone in the rank cutoff") {
    for (int i = 0; i < 250; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        Divisor nu = random_slope();
        Rational m = random_m(e);
        long r = uniform(1, 15);
        CHECK(leq(dlp_below_rank(nu, m, e, r, table(e)), dlp_below_rank(nu, m, e, r + 1, table(e))));
    }
}

TEST_CASE("monotone in the distance from the anticanonical polarization") {
    for (int i = 0; i < 250; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        Rational mstar = 1 - Rational(e, 2);
        Divisor nu = random_slope();
        long r = uniform(2, 12);
        Rational t1 = Rational(uniform(0, 30), 10), t2 = t1 + Rational(uniform(0, 30), 10);
        Rational m1, m2;
        if (uniform(0, 1) == 0 || e == 1) {
            m1 = mstar + t1;
            m2 = mstar + t2;
        } else {
            // Below 1: walk towards 0 as m = 1/(1 + t).
            m1 = 1 / (1 + t1);
            m2 = 1 / (1 + t2);
        }
        if (m1.sign() <= 0 || m2.sign() <= 0) continue;
        CHECK(leq(dlp_below_rank(nu, m1, e, r, table(e)), dlp_below_rank(nu, m2, e, r, table(e))));
        CHECK(leq(dlp_line_bundles(nu, m1, e), dlp_line_bundles(nu, m2, e)));
    }
}

TEST_CASE("witnesses reproduce their values") {
    for (int i = 0; i < 250; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        Divisor nu = random_slope();
        Rational m = random_m(e);
        long r = uniform(2, 16);
        DlpValue v = dlp_below_rank(nu, m, e, r, table(e));
        if (!v.value) continue;
        REQUIRE(v.witness);
        CHECK(dlp_single(*v.witness, nu, m, e) == v.value);
        const ExceptionalRecord* W = table(e).find_class(v.witness->r, v.witness->a, v.witness->b);
        REQUIRE(W);
        CHECK(is_stable_at(*W, m));
        CHECK(v.witness->r < r);
    }
}

TEST_CASE("pruned search matches an enlarged-box brute force") {
    for (int i = 0; i < 200; ++i) {
        int e = static_cast<int>(uniform(0, 1));
        Divisor nu = random_slope(30);
        Rational m = Rational(uniform(1, 60), uniform(1, 12));
        long r = uniform(1, 17);
        DlpValue fast = dlp_below_rank(nu, m, e, r, table(e));
        auto slow = oracle::dlp_brute(nu, oracle::fq(m), e, r, table(e));
        REQUIRE(fast.value.has_value() == slow.has_value());
        if (slow) CHECK(oracle::fq(*fast.value) == *slow);
    }
}

}  // TEST_SUITE
