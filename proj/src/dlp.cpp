#include "hirz/dlp.hpp"

#include <algorithm>
#include <thread>

namespace hirz {

namespace {

struct Contributor {
    Divisor slope;
    Rational disc;
    Character base;
};

// Half-width of the strip: -K.H_m / 2.
Rational strip(const Rational& m, int e) { return m + Rational(e, 2) + 1; }

Rational branch_value(const Divisor& d, const Rational& t, const Rational& DV, int e) {
    if (t.sign() < 0) return hilbert_P(d, e) - DV;
    if (t.sign() > 0) return hilbert_P(-d, e) - DV;
    return max(hilbert_P(d, e), hilbert_P(-d, e)) - DV;
}

void require_polarization(const Rational& m) {
    if (m.sign() <= 0) throw std::invalid_argument("polarization parameter m must be positive");
}

// With c = m + e/2 and t = d.H_m, P(d) = (x+1)(1 + t - c x) on the branch t < 0,
// so a value >= 0 forces -1 <= x <= 1/c there; symmetrically on t > 0. Twists of
// one contributor with a nonnegative value therefore have |x| <= max(1, 1/c) and
// |t| <= c + 1, a finite box of integer twists.
void scan(const Divisor& nu, const Rational& m, int e, const Contributor& W, DlpValue& best) {
    const Rational c = m + Rational(e, 2);
    const Rational X = max(Rational(1), 1 / c);
    const Rational S = strip(m, e);
    const Divisor u = nu - W.slope;
    long long ilo = (u.a - X).ceil().to_ll(), ihi = (u.a + X).floor().to_ll();
    for (long long i = ilo; i <= ihi; ++i) {
        Rational x = u.a - Rational(i);
        Rational xm = x * m;
        long long jlo = (u.b - S + xm).ceil().to_ll(), jhi = (u.b + S + xm).floor().to_ll();
        for (long long j = jlo; j <= jhi; ++j) {
            Divisor d{x, u.b - Rational(j)};
            Rational t = xm + d.b;
            Rational val = branch_value(d, t, W.disc, e);
            if (val.sign() < 0) continue;
            if (best.value && val <= *best.value) continue;
            best.value = val;
            best.witness = twist(W.base, i, j, e);
            best.equal_slope_hit = t.is_zero() && !(d.a.is_zero() && d.b.is_zero());
        }
    }
}

}  // namespace

std::optional<Rational> dlp_single(const Character& V, const Divisor& nu, const Rational& m,
                                   int e) {
    require_polarization(m);
    Divisor d = nu - V.nu();
    Rational t = d.a * m + d.b;
    if (t.abs() > strip(m, e)) return std::nullopt;
    return branch_value(d, t, V.disc(e), e);
}

DlpValue dlp_line_bundles(const Divisor& nu, const Rational& m, int e) {
    require_polarization(m);
    DlpValue best;
    Character O = line_bundle(0, 0, e);
    scan(nu, m, e, {O.nu(), Rational(0), O}, best);
    return best;
}

DlpValue dlp_over(const Divisor& nu, const Rational& m, int e,
                  const std::vector<const ExceptionalRecord*>& contributors) {
    require_polarization(m);
    DlpValue best;
    for (const auto* W : contributors) scan(nu, m, e, {W->ch.nu(), W->ch.disc(e), W->ch}, best);
    return best;
}

DlpValue dlp_below_rank(const Divisor& nu, const Rational& m, int e, long long r,
                        const ExceptionalTable& table) {
    if (e != 0 && e != 1) throw std::invalid_argument("DLP needs e in {0,1}; reduce first");
    if (table.e != e) throw std::invalid_argument("table built for a different surface");
    if (table.max_rank < r - 1) throw std::invalid_argument("table does not cover ranks below " + std::to_string(r));
    std::vector<const ExceptionalRecord*> use;
    for (const auto& W : table.classes)
        if (W.ch.r < r && is_stable_at(W, m)) use.push_back(&W);
    return dlp_over(nu, m, e, use);
}

std::vector<GridPoint> dlp_grid(int e, const Rational& m, const Square& sq, long long steps,
                                long long rank_cutoff, const ExceptionalTable& table,
                                unsigned jobs) {
    if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
    const long long n = steps + 1;
    std::vector<GridPoint> out(static_cast<std::size_t>(n * n));
    auto coord = [&](const Rational& lo, const Rational& hi, long long k) {
        return steps == 0 ? lo : lo + (hi - lo) * Rational(k, steps);
    };
    auto work = [&](long long row0, long long stride) {
        for (long long row = row0; row < n; row += stride) {
            Rational phi = coord(sq.phi0, sq.phi1, row);
            for (long long col = 0; col < n; ++col) {
                Rational eps = coord(sq.eps0, sq.eps1, col);
                out[row * n + col] = {eps, phi, dlp_below_rank({eps, phi}, m, e, rank_cutoff, table)};
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (jobs == 1) {
        work(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(work, static_cast<long long>(k), static_cast<long long>(jobs));
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace hirz
