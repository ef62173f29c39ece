#include "hirz/exceptional.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "hirz/dlp.hpp"

namespace hirz {

namespace {

long long mod(long long x, long long r) {
    long long m = x % r;
    return m < 0 ? m + r : m;
}

void require_del_pezzo(int e) {
    if (e != 0 && e != 1) throw std::invalid_argument("exceptional tables need e in {0,1}; reduce first");
}

Rational exceptional_disc(long long r) { return Rational(1, 2) - Rational(1, 2 * r * r); }

// Character of rank r with c1 = (a, b) and the exceptional discriminant, if integral.
std::optional<Character> exceptional_character(long long r, long long a, long long b, int e) {
    Divisor nu{Rational(a, r), Rational(b, r)};
    Character v{r, a, b, Rational(r) * (intersect(nu, nu, e) / 2 - exceptional_disc(r))};
    if (!v.is_integral(e)) return std::nullopt;
    return v;
}

struct Hit {
    Rational m;
    BundleTag w;
};

}  // namespace

std::string BundleTag::str() const {
    return "(" + std::to_string(r) + ",(" + std::to_string(a) + "," + std::to_string(b) + "))";
}

std::string Interval::str() const {
    return "(" + lo.str() + "," + (hi ? hi->str() : std::string("inf")) + ")";
}

const ExceptionalRecord* ExceptionalTable::find_class(long long r, long long a, long long b) const {
    if (r <= 0) return nullptr;
    auto it = index.find({r, mod(a, r), mod(b, r)});
    return it == index.end() ? nullptr : &classes[it->second];
}

void ExceptionalTable::add_class(const ExceptionalRecord& rec) {
    index[{rec.ch.r, mod(rec.ch.a, rec.ch.r), mod(rec.ch.b, rec.ch.r)}] = classes.size();
    classes.push_back(rec);
}

bool is_potentially_exceptional(const Character& v, int e) {
    if (v.r <= 0 || !v.is_integral(e)) return false;
    return euler_pair(v, v, e) == Rational(1);
}

Character canonical_representative(const Character& v, int e) {
    require_del_pezzo(e);
    long long r = v.r;
    if (r <= 0) throw std::domain_error("rank must be positive");
    std::vector<std::pair<long long, long long>> orbit = {{mod(v.a, r), mod(v.b, r)},
                                                          {mod(-v.a, r), mod(-v.b, r)}};
    if (e == 0) {
        orbit.push_back({mod(v.b, r), mod(v.a, r)});
        orbit.push_back({mod(-v.b, r), mod(-v.a, r)});
    }
    std::optional<std::pair<long long, long long>> best;
    for (auto [a, b] : orbit) {
        bool ok = e == 0 ? (2 * a < r && a <= b) : 2 * a <= r;
        if (ok && (!best || std::pair(a, b) < *best)) best = std::pair(a, b);
    }
    if (!best) throw std::logic_error("no canonical representative for " + v.str());
    Character out{r, best->first, best->second, v.ch2};
    // ch2 changes under twist; rebuild from the invariant discriminant.
    Divisor nu = out.nu();
    out.ch2 = Rational(r) * (intersect(nu, nu, e) / 2 - v.disc(e));
    return out;
}

std::vector<Character> potential_characters(int e, long long rmax) {
    require_del_pezzo(e);
    std::vector<Character> out;
    for (long long r = 1; r <= rmax; ++r) {
        for (long long a = 0; a < r; ++a) {
            if (std::gcd(a, r) != 1) continue;
            for (long long b = 0; b < r; ++b) {
                auto v = exceptional_character(r, a, b, e);
                if (!v) continue;
                if (canonical_representative(*v, e) == *v) out.push_back(*v);
            }
        }
    }
    return out;
}

bool is_stable_at(const ExceptionalRecord& rec, const Rational& m) { return rec.interval.contains(m); }

// Walls come from bundles W with q = +-(nu(V) - nu(W)) in the region where P > 0
// and the coordinates have opposite signs: the vertical strip (-1,0) x (0,inf)
// and the horizontal piece (0,inf) x (-1,0) (a triangle when e = 1). Line bundles
// far out in the vertical strip give a wall M1 above 1 - e/2; for e = 0 the
// horizontal strip gives M0 below it. Any wall in (M0, M1) has q inside a bounded
// region, so enumerating twists there finds every wall that can bound I_V.
ExceptionalRecord stability_interval(const Character& v, const ExceptionalTable& table,
                                     WallSide side) {
    int e = table.e;
    require_del_pezzo(e);
    ExceptionalRecord rec{v, {}, std::nullopt, std::nullopt};
    if (v.r == 1) return rec;
    if (table.max_rank < v.r - 1) throw std::invalid_argument("table does not cover lower ranks");

    const long long sigma = side == WallSide::Sub ? 1 : -1;
    const Rational mstar = 1 - Rational(e, 2);
    const Divisor nuV = v.nu();
    const Rational DV = v.disc(e);
    if (nuV.a.is_integer() || nuV.b.is_integer())
        throw std::logic_error("exceptional slope with an integral coordinate: " + v.str());

    std::vector<Hit> hits;
    auto wall = [](const Divisor& q) { return -q.b / q.a; };
    // q = u - (i, j); the twist applied to W's representative is sigma * (i, j).
    auto tag = [&](const ExceptionalRecord& W, long long i, long long j) {
        return BundleTag{W.ch.r, W.ch.a + W.ch.r * sigma * i, W.ch.b + W.ch.r * sigma * j};
    };
    auto consider = [&](const ExceptionalRecord& W, const Divisor& q, long long i, long long j) {
        if (q.a.sign() * q.b.sign() >= 0) return;
        if (!(hilbert_P(q, e) > DV + W.ch.disc(e))) return;
        Rational m = wall(q);
        if (!W.interval.contains(m)) return;
        hits.push_back({m, tag(W, i, j)});
    };

    const ExceptionalRecord* O = table.find_class(1, 0, 0);
    if (!O) throw std::logic_error("table lacks the structure sheaf");
    const Divisor u0 = Rational(sigma) * nuV;

    // Sentinel M1 from the vertical strip.
    Rational M1;
    {
        long long i = u0.a.ceil().to_ll();
        Rational x = u0.a - Rational(i);
        for (long long j = u0.b.ceil().to_ll() - 1;; --j) {
            Divisor q{x, u0.b - Rational(j)};
            if (hilbert_P(q, e) > DV && wall(q) > mstar) {
                M1 = wall(q);
                hits.push_back({M1, tag(*O, i, j)});
                break;
            }
        }
    }
    // Sentinel M0 from the horizontal strip (e = 0 only).
    Rational M0(0);
    if (e == 0) {
        long long j = u0.b.floor().to_ll() + 1;
        Rational y = u0.b - Rational(j);
        for (long long i = u0.a.ceil().to_ll() - 1;; --i) {
            Divisor q{u0.a - Rational(i), y};
            if (hilbert_P(q, e) > DV && wall(q) < mstar) {
                M0 = wall(q);
                hits.push_back({M0, tag(*O, i, j)});
                break;
            }
        }
    }

    for (const auto& W : table.classes) {
        if (W.ch.r >= v.r) continue;
        Divisor u = Rational(sigma) * (nuV - W.ch.nu());
        if (!u.a.is_integer()) {
            long long i = u.a.ceil().to_ll();
            Rational x = u.a - Rational(i);
            Rational ymax = M1 * (-x);
            for (long long j = u.b.ceil().to_ll() - 1;; --j) {
                Rational y = u.b - Rational(j);
                if (y > ymax) break;
                consider(W, {x, y}, i, j);
            }
        }
        if (!u.b.is_integer()) {
            long long j = u.b.floor().to_ll() + 1;
            Rational y = u.b - Rational(j);
            Rational xmax = e == 0 ? (-y) / M0 : 2 * (1 + y);
            for (long long i = u.a.ceil().to_ll() - 1;; --i) {
                Rational x = u.a - Rational(i);
                if (x > xmax) break;
                consider(W, {x, y}, i, j);
            }
        }
    }

    std::optional<Hit> lo, hi;
    for (const auto& h : hits) {
        if (h.m == mstar) throw std::logic_error("anticanonical wall for " + v.str());
        if (h.m < mstar) {
            if (!lo || h.m > lo->m || (h.m == lo->m && h.w < lo->w)) lo = h;
        } else {
            if (!hi || h.m < hi->m || (h.m == hi->m && h.w < hi->w)) hi = h;
        }
    }
    if (lo) {
        rec.interval.lo = lo->m;
        rec.w0 = lo->w;
    }
    if (!hi) throw std::logic_error("no upper wall found for " + v.str());
    rec.interval.hi = hi->m;
    rec.w1 = hi->w;
    return rec;
}

namespace {

void add_rank(ExceptionalTable& t, long long r, unsigned jobs) {
    int e = t.e;
    if (r == 1) {
        t.add_class({line_bundle(0, 0, e), {}, std::nullopt, std::nullopt});
        t.records.push_back(t.classes.back());
        return;
    }
    std::vector<Character> cands;
    for (long long a = 0; a < r; ++a) {
        if (std::gcd(a, r) != 1) continue;
        for (long long b = 0; b < r; ++b)
            if (auto v = exceptional_character(r, a, b, e)) cands.push_back(*v);
    }
    // Every candidate of this rank only depends on lower ranks, so they are
    // evaluated independently and published together in candidate order.
    struct Outcome {
        std::optional<ExceptionalRecord> rec;
        std::optional<Rational> bound;
    };
    std::vector<Outcome> out(cands.size());
    const Rational mstar = 1 - Rational(e, 2);
    auto work = [&](std::size_t i0, std::size_t stride) {
        for (std::size_t i = i0; i < cands.size(); i += stride) {
            const Character& v = cands[i];
            DlpValue bound = dlp_below_rank(v.nu(), mstar, e, r, t);
            if (bound.value && v.disc(e) < *bound.value)
                out[i].bound = bound.value;
            else
                out[i].rec = stability_interval(v, t);
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cands.size())));
    if (jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(work, k, jobs);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const Character& v = cands[i];
        bool canon = canonical_representative(v, e) == v;
        if (out[i].bound) {
            if (canon)
                t.rejected.push_back({v, "Delta " + v.disc(e).str() + " < DLP " + out[i].bound->str() +
                                             " at the anticanonical polarization"});
            continue;
        }
        t.add_class(*out[i].rec);
        if (canon) t.records.push_back(*out[i].rec);
    }
}

}  // namespace

ExceptionalTable build_table(int e, long long rmax, unsigned jobs) {
    require_del_pezzo(e);
    ExceptionalTable t;
    t.e = e;
    extend_table(t, rmax, jobs);
    return t;
}

void extend_table(ExceptionalTable& table, long long rmax, unsigned jobs) {
    require_del_pezzo(table.e);
    for (long long r = table.max_rank + 1; r <= rmax; ++r) {
        add_rank(table, r, jobs);
        table.max_rank = r;
    }
}

bool is_exceptional(const Character& v, const ExceptionalTable& table) {
    int e = table.e;
    if (!is_potentially_exceptional(v, e)) throw std::invalid_argument(v.str() + " is not potentially exceptional");
    if (v.r <= table.max_rank) return table.find_class(v.r, v.a, v.b) != nullptr;
    if (table.max_rank < v.r - 1) throw std::invalid_argument("table does not cover lower ranks");
    DlpValue bound = dlp_below_rank(v.nu(), 1 - Rational(e, 2), e, v.r, table);
    return !bound.value || v.disc(e) >= *bound.value;
}

using nlohmann::json;

namespace {

json tag_json(const std::optional<BundleTag>& w) {
    if (!w) return nullptr;
    return json::array({w->r, w->a, w->b});
}

std::optional<BundleTag> tag_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("bad certificate");
    return BundleTag{j[0].get<long long>(), j[1].get<long long>(), j[2].get<long long>()};
}

}  // namespace

void write_cache(std::ostream& os, const ExceptionalTable& table) {
    os << json{{"format", "hirz-exceptional"}, {"e", table.e}, {"max_rank", table.max_rank}}.dump()
       << '\n';
    for (const auto& c : table.classes) {
        json j{{"e", table.e},
               {"r", c.ch.r},
               {"a", c.ch.a},
               {"b", c.ch.b},
               {"lo", c.interval.lo.str()},
               {"hi", c.interval.hi ? c.interval.hi->str() : "inf"},
               {"w0", tag_json(c.w0)},
               {"w1", tag_json(c.w1)}};
        os << j.dump() << '\n';
    }
}

bool read_cache(std::istream& is, ExceptionalTable& table, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    ExceptionalTable t;
    std::string line;
    if (!std::getline(is, line)) return fail("empty cache");
    try {
        json head = json::parse(line);
        if (head.value("format", "") != "hirz-exceptional") return fail("missing cache header");
        t.e = head.at("e").get<int>();
        long long max_rank = head.at("max_rank").get<long long>();
        if (t.e != 0 && t.e != 1) return fail("cache has unsupported e");
        long long lineno = 1;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty()) continue;
            json j = json::parse(line);
            if (j.at("e").get<int>() != t.e) return fail("mixed e at line " + std::to_string(lineno));
            long long r = j.at("r").get<long long>();
            long long a = j.at("a").get<long long>(), b = j.at("b").get<long long>();
            if (r < 1 || r > max_rank || a < 0 || a >= std::max(r, 1LL) || b < 0 || b >= std::max(r, 1LL))
                return fail("class out of range at line " + std::to_string(lineno));
            auto v = exceptional_character(r, a, b, t.e);
            if (!v) return fail("non-integral class at line " + std::to_string(lineno));
            ExceptionalRecord rec{*v, {}, tag_from(j.at("w0")), tag_from(j.at("w1"))};
            rec.interval.lo = Rational::parse(j.at("lo").get<std::string>());
            std::string hi = j.at("hi").get<std::string>();
            if (hi != "inf") rec.interval.hi = Rational::parse(hi);
            t.add_class(rec);
            if (canonical_representative(rec.ch, t.e) == rec.ch) t.records.push_back(rec);
        }
        t.max_rank = max_rank;
        if (!t.find_class(1, 0, 0) && max_rank >= 1) return fail("cache lacks the structure sheaf");
    } catch (const std::exception& ex) {
        return fail(std::string("malformed cache: ") + ex.what());
    }
    table = std::move(t);
    return true;
}

}  // namespace hirz
