#include "hirz/existence.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "hirz/dlp.hpp"
#include "hirz/prioritary.hpp"

namespace hirz {

namespace {

std::optional<Character> character_with_disc(long long r, long long a, long long b,
                                              const Rational& D, int e) {
    Divisor nu{Rational(a, r), Rational(b, r)};
    Character w{r, a, b, Rational(r) * (intersect(nu, nu, e) / 2 - D)};
    if (!w.is_integral(e)) return std::nullopt;
    return w;
}

struct MemoKey {
    int e;
    Rational m;
    Character v;
    bool operator==(const MemoKey&) const = default;
};

struct MemoHash {
    std::size_t operator()(const MemoKey& k) const noexcept {
        std::size_t h = std::hash<long long>()(k.v.r);
        auto mix = [&h](std::size_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
        mix(std::hash<int>()(k.e));
        mix(k.m.hash());
        mix(std::hash<long long>()(k.v.a));
        mix(std::hash<long long>()(k.v.b));
        mix(k.v.ch2.hash());
        return h;
    }
};

// nullopt: no prioritary sheaves.
using MemoValue = std::optional<std::vector<Character>>;

std::mutex memo_mutex;
std::unordered_map<MemoKey, MemoValue, MemoHash> memo;

std::optional<std::vector<Character>> compute_hn(const Character& v, const Rational& m, int e);

// The memo is keyed on the exact character. Twisting by L shifts chi/r of two
// factors with equal H_m-slope by (nu_1 - nu_2).L, so the Gieseker order, and
// with it the filtration, is not twist-equivariant on walls.
std::optional<std::vector<Character>> hn_factors(const Character& v, const Rational& m, int e) {
    MemoKey key{e, m, v};
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    MemoValue val = compute_hn(v, m, e);
    {
        std::lock_guard<std::mutex> lock(memo_mutex);
        memo.insert_or_assign(key, val);
    }
    return val;
}

bool semistable_exists(const Character& w, const Rational& m, int e) {
    if (w.disc(e).sign() < 0) return false;
    auto f = hn_factors(w, m, e);
    return f && f->size() == 1;
}

// Try w1 as the first HN factor of v. On success returns the full list.
std::optional<std::vector<Character>> try_first_factor(const Character& v, const Character& w1,
                                                       const Rational& m, long long mc, int e) {
    if (w1.disc(e).sign() < 0) return std::nullopt;
    Character u = v - w1;
    if (u.disc(e).sign() < 0) return std::nullopt;
    if (mu(w1, m, e) - mu(u, m, e) > Rational(1)) return std::nullopt;
    if (!prioritary_nonempty(u, mc, e)) return std::nullopt;
    if (!euler_pair(w1, u, e).is_zero()) return std::nullopt;
    if (!semistable_exists(w1, m, e)) return std::nullopt;
    auto rest = hn_factors(u, m, e);
    if (!rest) return std::nullopt;
    if (!(reduced_hilbert_key(w1, m, e) > reduced_hilbert_key(rest->front(), m, e))) return std::nullopt;
    if (mu(w1, m, e) - mu(rest->back(), m, e) > Rational(1)) return std::nullopt;
    for (const auto& w : *rest)
        if (!euler_pair(w1, w, e).is_zero()) return std::nullopt;
    std::vector<Character> out{w1};
    out.insert(out.end(), rest->begin(), rest->end());
    return out;
}

std::optional<std::vector<Character>> compute_hn(const Character& v, const Rational& m, int e) {
    const long long mc = m.ceil().to_ll();
    if (!prioritary_nonempty(v, mc, e)) return std::nullopt;
    if (v.r == 1) return std::vector<Character>{v};

    const long long r = v.r;
    const Divisor nu = v.nu();
    const Rational D = v.disc(e);
    const Rational muv = mu(v, m, e);
    const Rational c = m + Rational(e, 2);
    const Rational Bf = max(Rational(1), 1 / c);
    // Largest P(nu_j - nu_1) over the slope-difference region; bounds Delta_1.
    const Rational B = (1 + c) * (1 + c) / (4 * c);

    for (long long r1 = 1; r1 < r; ++r1) {
        const Rational R1(r1);
        long long alo = (R1 * (nu.a - Bf)).floor().to_ll() + 1;
        long long ahi = (R1 * (nu.a + Bf)).ceil().to_ll() - 1;
        for (long long a1 = alo; a1 <= ahi; ++a1) {
            Rational am = Rational(a1) * m;
            long long blo = (R1 * muv - am).ceil().to_ll();
            long long bhi = (R1 * (muv + 1) - am).ceil().to_ll() - 1;
            for (long long b1 = blo; b1 <= bhi; ++b1) {
                Divisor nu1{Rational(a1, r1), Rational(b1, r1)};
                Rational Pd = hilbert_P(nu - nu1, e);
                if (2 * r1 != r) {
                    // chi(w1, u) = 0 pins Delta_1.
                    Rational D1 = (R1 - Rational(r) * Pd + Rational(r) * D) / Rational(2 * r1 - r);
                    if (D1.sign() < 0) continue;
                    auto w1 = character_with_disc(r1, a1, b1, D1, e);
                    if (!w1) continue;
                    if (auto hit = try_first_factor(v, *w1, m, mc, e)) return hit;
                } else {
                    if (Pd != D + Rational(1, 2)) continue;
                    Rational off = disc_offset(r1, a1, b1, e);
                    long long k0 = (-off * R1).ceil().to_ll();
                    for (long long k = k0;; ++k) {
                        Rational D1 = off + Rational(k, r1);
                        if (D1 > B) break;
                        auto w1 = character_with_disc(r1, a1, b1, D1, e);
                        if (!w1) continue;
                        if (auto hit = try_first_factor(v, *w1, m, mc, e)) return hit;
                    }
                }
            }
        }
    }
    if (!prioritary_nonempty(v, mc + 1, e))
        throw std::logic_error("no destabilizing factor for " + v.str() + " at m = " + m.str() +
                               " but it is not H_{ceil m + 1}-prioritary");
    return std::vector<Character>{v};
}

bool slope_wall(const std::vector<Character>& f, const Rational& m, int e) {
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (mu(f[i], m, e) == mu(f[j], m, e) && !(f[i].nu() == f[j].nu())) return true;
    return false;
}

}  // namespace

std::optional<HNDecomposition> hn_generic(const Character& v, const Rational& m, int e) {
    if (m.sign() <= 0) throw std::invalid_argument("polarization parameter m must be positive");
    if (e < 0) throw std::invalid_argument("e must be nonnegative");
    if (v.r <= 0) throw std::domain_error("rank must be positive");
    if (!v.is_integral(e)) throw IntegralityError(v.str() + " is not integral");
    if (v.disc(e).sign() < 0) throw BogomolovError("Delta = " + v.disc(e).str() + " < 0");
    auto f = hn_factors(v, m, e);
    if (!f) return std::nullopt;
    return HNDecomposition{std::move(*f), m, e};
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Nonempty: return "NONEMPTY";
        case Verdict::Empty: return "EMPTY";
        case Verdict::NoPrioritary: return "NO_PRIORITARY";
        case Verdict::BogomolovViolation: return "BOGOMOLOV_VIOLATION";
    }
    return "?";
}

DecisionCertificate moduli_nonempty(const Character& v, const Rational& m, int e) {
    DecisionCertificate cert;
    if (v.r > 0 && v.disc(e).sign() < 0) {
        cert.verdict = Verdict::BogomolovViolation;
        return cert;
    }
    auto hn = hn_generic(v, m, e);
    if (!hn) {
        cert.verdict = Verdict::NoPrioritary;
        return cert;
    }
    if (hn->length() == 1) {
        cert.verdict = Verdict::Nonempty;
        return cert;
    }
    cert.verdict = Verdict::Empty;
    cert.wall_flag = slope_wall(hn->factors, m, e);
    cert.hn = std::move(hn);
    return cert;
}

long long minimal_rank(const Divisor& nu) {
    return std::lcm(nu.a.den().to_ll(), nu.b.den().to_ll());
}

DeltaBracket delta_estimate(const Divisor& nu, const Rational& m, int e, long long rank_cutoff,
                            const ExceptionalTable* table, unsigned jobs) {
    if (m.sign() <= 0) throw std::invalid_argument("polarization parameter m must be positive");
    DeltaBracket out{nu, m, rank_cutoff, Rational(1, 2), std::nullopt, std::nullopt, false};
    if ((e == 0 || e == 1) && table) {
        DlpValue lb = dlp_below_rank(nu, m, e, rank_cutoff, *table);
        if (lb.value) out.lower = max(out.lower, *lb.value);
        // An equal-slope witness means m is a mu-wall for nu; the bound then
        // holds for mu-stable sheaves only and may exceed the semistable upper.
        if (lb.value && lb.equal_slope_hit && *lb.value > Rational(1, 2)) out.wall_flag = true;
    }
    const long long r0 = minimal_rank(nu);
    std::vector<long long> ranks;
    for (long long r = r0; r <= rank_cutoff; r += r0) ranks.push_back(r);

    struct RankResult {
        std::optional<Character> hit;
        bool wall = false;
    };
    std::vector<RankResult> results(ranks.size());
    auto scan = [&](std::size_t idx) {
        long long r = ranks[idx];
        Divisor c1 = Rational(r) * nu;
        long long a = c1.a.to_ll(), b = c1.b.to_ll();
        Rational off = disc_offset(r, a, b, e);
        long long k = (Rational(r) * (Rational(1, 2) - off)).ceil().to_ll();
        // NONEMPTY persists as Delta grows, and a finite threshold exists.
        for (long long steps = 0;; ++k, ++steps) {
            if (steps > 1000 * r) throw std::runtime_error("delta scan did not terminate at rank " + std::to_string(r));
            Rational D = off + Rational(k, r);
            auto w = character_with_disc(r, a, b, D, e);
            if (!w) throw std::logic_error("discriminant lattice mismatch");
            DecisionCertificate cert = moduli_nonempty(*w, m, e);
            if (cert.wall_flag) results[idx].wall = true;
            if (cert.verdict == Verdict::Nonempty) {
                results[idx].hit = *w;
                return;
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(ranks.size(), 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < ranks.size(); ++i) scan(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < ranks.size(); i += jobs) scan(i);
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& res : results) {
        out.wall_flag = out.wall_flag || res.wall;
        if (!res.hit) continue;
        Rational D = res.hit->disc(e);
        if (!out.upper || D < *out.upper) {
            out.upper = D;
            out.witness = res.hit;
        }
    }
    return out;
}

bool exists_above(const Character& v, const Rational& m, int e, int steps) {
    if (moduli_nonempty(v, m, e).verdict != Verdict::Nonempty) return false;
    for (int k = 1; k <= steps; ++k) {
        Character w{v.r, v.a, v.b, v.ch2 - Rational(k)};
        if (moduli_nonempty(w, m, e).verdict != Verdict::Nonempty) return false;
    }
    return true;
}

std::size_t hn_memo_size() {
    std::lock_guard<std::mutex> lock(memo_mutex);
    return memo.size();
}

void hn_memo_clear() {
    std::lock_guard<std::mutex> lock(memo_mutex);
    memo.clear();
}

}  // namespace hirz
