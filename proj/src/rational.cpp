#include "hirz/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>

namespace hirz {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr long long kMax = std::numeric_limits<long long>::max();
constexpr long long kMin = std::numeric_limits<long long>::min();

u128 uabs(i128 x) { return x < 0 ? u128(0) - u128(x) : u128(x); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long gcd64(long long a, long long b) {
    unsigned long long x = a < 0 ? 0ull - static_cast<unsigned long long>(a) : a;
    unsigned long long y = b < 0 ? 0ull - static_cast<unsigned long long>(b) : b;
    while (y != 0) {
        unsigned long long t = x % y;
        x = y;
        y = t;
    }
    return static_cast<long long>(x);
}

bool fits(i128 x) { return x >= kMin && x <= kMax; }

mpz_class to_mpz(i128 x) {
    bool neg = x < 0;
    u128 u = uabs(x);
    mpz_class hi = static_cast<unsigned long>(static_cast<unsigned long long>(u >> 64));
    mpz_class lo = static_cast<unsigned long>(static_cast<unsigned long long>(u));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

mpz_class to_mpz(long long x) {
    mpz_class r;
    mpz_set_si(r.get_mpz_t(), x);
    return r;
}

}  // namespace

Rational::Rational(long long n) : n_(n), d_(1) {}

Rational::Rational(long long n, long long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(n, d);
}

Rational::Rational(const mpq_class& q) {
    big_ = std::make_unique<mpq_class>(q);
    big_->canonicalize();
    normalize_big();
}

Rational::Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
    if (this != &o) {
        n_ = o.n_;
        d_ = o.d_;
        big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
}

void Rational::normalize_big() {
    const mpz_class& n = big_->get_num();
    const mpz_class& d = big_->get_den();
    if (n.fits_slong_p() && d.fits_slong_p()) {
        n_ = n.get_si();
        d_ = d.get_si();
        big_.reset();
    }
}

Rational Rational::from_wide(i128 n, i128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    u128 g = gcd128(uabs(n), u128(d));
    if (g > 1) {
        n /= static_cast<i128>(g);
        d /= static_cast<i128>(g);
    }
    Rational r;
    if (fits(n) && fits(d)) {
        r.n_ = static_cast<long long>(n);
        r.d_ = static_cast<long long>(d);
    } else {
        r.big_ = std::make_unique<mpq_class>(to_mpz(n), to_mpz(d));
    }
    return r;
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(to_mpz(n_), to_mpz(d_));
}

Rational Rational::parse(std::string_view s) {
    std::string t(s);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    size_t i = 0;
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    t = t.substr(i);
    if (t.empty()) throw ParseError("empty rational");
    if (t.find_first_of(".eE") != std::string::npos) {
        // Offer the exact fraction the user probably meant.
        std::string hint;
        auto dot = t.find('.');
        if (dot != std::string::npos && t.find_first_of("eE") == std::string::npos) {
            std::string digits = t.substr(0, dot) + t.substr(dot + 1);
            std::string den = "1" + std::string(t.size() - dot - 1, '0');
            try {
                mpq_class q(mpz_class(digits.empty() || digits == "-" ? digits + "0" : digits, 10),
                            mpz_class(den, 10));
                q.canonicalize();
                hint = " (did you mean " + Rational(q).str() + "?)";
            } catch (...) {
            }
        }
        throw ParseError("floating-point literal '" + t + "' is not accepted; use p/q" + hint);
    }
    auto check = [&](const std::string& part) {
        size_t k = 0;
        if (k < part.size() && (part[k] == '-' || part[k] == '+')) ++k;
        if (k == part.size()) throw ParseError("malformed rational '" + t + "'");
        for (; k < part.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(part[k])))
                throw ParseError("malformed rational '" + t + "'");
    };
    auto slash = t.find('/');
    std::string ns = t.substr(0, slash);
    std::string ds = slash == std::string::npos ? "1" : t.substr(slash + 1);
    check(ns);
    check(ds);
    if (ns[0] == '+') ns = ns.substr(1);
    if (ds[0] == '+') ds = ds.substr(1);
    mpz_class num(ns, 10), den(ds, 10);
    if (den == 0) throw ParseError("zero denominator in '" + t + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const {
    if (big_) {
        if (big_->get_den() == 1) return big_->get_num().get_str();
        return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    }
    if (d_ == 1) return std::to_string(n_);
    return std::to_string(n_) + "/" + std::to_string(d_);
}

int Rational::sign() const {
    if (big_) return sgn(*big_);
    return (n_ > 0) - (n_ < 0);
}

bool Rational::is_integer() const {
    if (big_) return big_->get_den() == 1;
    return d_ == 1;
}

Rational Rational::num() const {
    if (big_) return Rational(mpq_class(big_->get_num()));
    return Rational(n_);
}

Rational Rational::den() const {
    if (big_) return Rational(mpq_class(big_->get_den()));
    return Rational(d_);
}

Rational Rational::floor() const {
    if (big_) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
        return Rational(mpq_class(f));
    }
    long long q = n_ / d_;
    if ((n_ % d_ != 0) && (n_ < 0)) --q;
    return Rational(q);
}

Rational Rational::ceil() const {
    if (big_) {
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
        return Rational(mpq_class(c));
    }
    long long q = n_ / d_;
    if ((n_ % d_ != 0) && (n_ > 0)) ++q;
    return Rational(q);
}

long long Rational::to_ll() const {
    if (big_ || d_ != 1) throw std::range_error("rational " + str() + " is not a machine integer");
    return n_;
}

Rational Rational::operator-() const {
    if (big_ || n_ == kMin) return Rational(mpq_class(-to_mpq()));
    Rational r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
    if (a.d_ == 1 && b.d_ == 1) {
        long long s;
        if (!__builtin_add_overflow(a.n_, b.n_, &s)) return Rational(s);
    }
    return Rational::from_wide(i128(a.n_) * b.d_ + i128(b.n_) * a.d_, i128(a.d_) * b.d_);
}

Rational operator-(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
    if (a.d_ == 1 && b.d_ == 1) {
        long long s;
        if (!__builtin_sub_overflow(a.n_, b.n_, &s)) return Rational(s);
    }
    return Rational::from_wide(i128(a.n_) * b.d_ - i128(b.n_) * a.d_, i128(a.d_) * b.d_);
}

Rational operator*(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
    if (a.d_ == 1 && b.d_ == 1) {
        long long s;
        if (!__builtin_mul_overflow(a.n_, b.n_, &s)) return Rational(s);
    }
    return Rational::from_wide(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw std::domain_error("division by zero");
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() / b.to_mpq()));
    return Rational::from_wide(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical forms differ in representation size
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        i128 l = i128(a.n_) * b.d_;
        i128 r = i128(b.n_) * a.d_;
        return l <=> r;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c <=> 0;
}

std::size_t Rational::hash() const {
    if (big_) return std::hash<std::string>{}(str());
    std::size_t h = std::hash<long long>{}(n_);
    return h ^ (std::hash<long long>{}(d_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational gcd_int(const Rational& a, const Rational& b) {
    if (!a.is_integer() || !b.is_integer()) throw std::domain_error("gcd of non-integers");
    if (a.fits_small() && b.fits_small()) return Rational(gcd64(a.to_ll(), b.to_ll()));
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.to_mpq().get_num_mpz_t(), b.to_mpq().get_num_mpz_t());
    return Rational(mpq_class(g));
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace hirz
