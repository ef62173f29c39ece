#include "hirz/kronecker.hpp"

#include "hirz/existence.hpp"

namespace hirz {

namespace {

void require_params(int e, long long ell) {
    if (e != 0 && e != 1) throw std::invalid_argument("Kronecker constructions need e in {0,1}");
    if (ell < 3) throw std::invalid_argument("Kronecker constructions need l >= 3");
}

// p + q sqrt(D) with a fixed D.
struct Surd {
    Rational p, q;
};

Surd mul(const Surd& x, const Surd& y, const Rational& D) {
    return {x.p * y.p + x.q * y.q * D, x.p * y.q + x.q * y.p};
}

// Sign of alpha + beta sqrt(D2) with alpha, beta in Q(sqrt(D1)).
int sign_nested(const Surd& alpha, const Surd& beta, const Rational& D1, const Rational& D2) {
    int sa = sign_surd(alpha.p, alpha.q, D1), sb = sign_surd(beta.p, beta.q, D1);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    Surd a2 = mul(alpha, alpha, D1), b2 = mul(beta, beta, D1);
    int sg = sign_surd(a2.p - b2.p * D2, a2.q - b2.q * D2, D1);
    return sa > 0 ? sg : -sg;
}

// Orientation of (P2, P3, (x0, y0)) up to a positive factor. P2 is the end of the
// K-segment at ratio psi_N and P3 the end of the L-segment at ratio psi_M.
int side_of_P2P3(const Rational& x0, const Rational& y0, int e, long long ell) {
    long long k = ell - e, N = 2 * (k - 1) + e, M = 2 * (ell + 1) - e;
    Rational K1(k - 1), L(ell);
    // Homogeneous P2 = (s, 1 - s(k-1), 1 + s), P3 = (1, l, t - 1); expand the
    // determinant as A + B s + C t + D s t.
    Rational A = -(1 + x0) + (y0 - L * x0);
    Rational B = (L + y0) + K1 * (1 + x0) + (y0 - L * x0);
    Rational C = x0;
    Rational D = -y0 - K1 * x0;
    Rational DN(N * N - 4), DM(M * M - 4);
    // s = (N + sqrt DN)/2, t = (M + sqrt DM)/2.
    Surd u{A + B * Rational(N, 2), B / 2};
    Surd w{C + D * Rational(N, 2), D / 2};
    Surd alpha{u.p + w.p * Rational(M, 2), u.q + w.q * Rational(M, 2)};
    Surd beta{w.p / 2, w.q / 2};
    return sign_nested(alpha, beta, DN, DM);
}

}  // namespace

int sign_surd(const Rational& p, const Rational& q, const Rational& D) {
    if (D.sign() < 0) throw std::domain_error("negative radicand");
    int sp = p.sign(), sq = D.is_zero() ? 0 : q.sign();
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    int c = (p * p <=> q * q * D) > 0 ? 1 : ((p * p == q * q * D) ? 0 : -1);
    return sp > 0 ? c : -c;
}

bool inside_psi(const Rational& q, long long n) { return (q * q - Rational(n) * q + 1).sign() < 0; }

std::optional<std::string> admissibility_failure(const KroneckerParams& p) {
    if (p.e != 0 && p.e != 1) return "e must be 0 or 1";
    if (p.ell < 3) return "l must be at least 3";
    if (p.a <= 0 || p.b <= 0 || p.c <= 0 || p.d <= 0) return "a, b, c, d must be positive";
    Rational ba(p.b, p.a), dc(p.d, p.c);
    if (!inside_psi(ba, p.N())) return "b/a = " + ba.str() + " is outside (psi_N^-1, psi_N)";
    if (!(dc > Rational(2 * p.ell - p.e + 1))) return "d/c = " + dc.str() + " is not above 2l-e+1";
    if (!inside_psi(dc, p.M())) return "d/c = " + dc.str() + " is not below psi_M";
    return std::nullopt;
}

KroneckerCharacters kronecker_characters(const KroneckerParams& p) {
    if (auto why = admissibility_failure(p)) throw std::invalid_argument("inadmissible parameters: " + *why);
    int e = p.e;
    Character k = p.b * line_bundle(1, -(p.k() - 1), e) + p.a * line_bundle(0, 1, e);
    Character l = p.d * line_bundle(0, 0, e) - p.c * line_bundle(-1, -p.ell, e);
    return {k, l, k + l};
}

Rational wall_mK(const KroneckerParams& p) { return Rational(p.k()); }

Rational wall_mL(const KroneckerParams& p) { return Rational(p.d, p.c) - Rational(p.ell + 1); }

Rational wall_mV(const KroneckerParams& p) {
    KroneckerCharacters ch = kronecker_characters(p);
    const Character& K = ch.k;
    const Character& L = ch.l;
    // (a_K m + b_K) r_L = (a_L m + b_L) r_K.
    Rational num(L.b * K.r - K.b * L.r), den(K.a * L.r - L.a * K.r);
    if (den.is_zero()) throw std::logic_error("K and L have parallel slopes");
    Rational m = num / den;
    if (!(m > 1 - Rational(p.e, 2) && m < wall_mK(p) && m < wall_mL(p)))
        throw std::logic_error("wall m_V = " + m.str() + " outside (1 - e/2, min(m_K, m_L))");
    return m;
}

bool in_triangle_R(const Divisor& nu, int e, long long ell) {
    require_params(e, ell);
    long long k = ell - e;
    const Rational& x0 = nu.a;
    const Rational& y0 = nu.b;
    if (!((y0 + Rational(k) * x0 - 1).sign() < 0)) return false;
    if (!((y0 - Rational(ell) * x0).sign() < 0)) return false;
    Rational x4(1, 2 * ell - e), y4(ell, 2 * ell - e);
    int s4 = side_of_P2P3(x4, y4, e, ell), s = side_of_P2P3(x0, y0, e, ell);
    return s != 0 && s == s4;
}

std::optional<KroneckerRatios> crossing_ratios(const Divisor& nu, const Rational& m, int e, long long ell) {
    long long k = ell - e;
    Rational S = nu.b + m * nu.a;
    Rational den = S + Rational(k - 1) - m;
    if (den.is_zero() || S.is_zero()) return std::nullopt;
    return KroneckerRatios{-(S - 1) / den, (S + m + Rational(ell)) / S};
}

std::optional<std::string> closed_form_failure(const Divisor& nu, const Rational& m, int e, long long ell) {
    if (e != 0 && e != 1) return "e must be 0 or 1";
    if (ell < 3) return "l must be at least 3";
    if (m.sign() <= 0) return "m must be positive";
    if (!in_triangle_R(nu, e, ell)) return "slope " + nu.str() + " is outside the triangle R";
    auto ratios = crossing_ratios(nu, m, e, ell);
    if (!ratios) return "line of slope -m through nu is parallel to a Kronecker segment";
    long long k = ell - e, N = 2 * (k - 1) + e, M = 2 * (ell + 1) - e;
    if (!inside_psi(ratios->b_over_a, N)) return "line misses the open segment P1P2";
    if (!(ratios->d_over_c > Rational(2 * ell - e + 1)) || !inside_psi(ratios->d_over_c, M))
        return "line misses the open segment P3P4";
    return std::nullopt;
}

Rational delta_closed_form(const Divisor& nu, const Rational& m, int e, long long ell) {
    if (auto why = closed_form_failure(nu, m, e, ell)) throw std::domain_error(*why);
    const Rational& x0 = nu.a;
    const Rational& y0 = nu.b;
    Rational kl(2 * ell - e);   // k + l
    Rational E(e);
    Rational value = -E / 2 * x0 * x0 + x0 * y0 + y0 / kl +
                     (Rational(ell) - Rational(1, 2) - E / 2 - E / (2 * kl)) * x0;
    Rational tail = (m - Rational(ell - e)) * (y0 - Rational(ell) * x0) /
                    (kl * kl * (y0 + m * x0 - (m + Rational(ell)) / kl));
    return value + tail;
}

KroneckerHnCheck kronecker_hn_check(const KroneckerParams& p) {
    KroneckerCharacters ch = kronecker_characters(p);
    Rational mV = wall_mV(p);
    Rational eps(1, 10);
    for (int j = 1; j <= 9; ++j, eps = eps / 10) {
        auto hn = hn_generic(ch.v, mV + eps, p.e);
        if (hn && hn->factors.size() == 2 && hn->factors[0] == ch.k && hn->factors[1] == ch.l)
            return {true, eps};
    }
    return {false, Rational(0)};
}

}  // namespace hirz
