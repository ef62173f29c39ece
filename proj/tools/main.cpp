#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hirz/prioritary.hpp"
#include "hirz/serialize.hpp"
#include "table_cache.hpp"

using namespace hirz;
using hirz::cli::CacheError;

namespace {

enum Exit { Ok = 0, Internal = 1, BadInput = 2, Precondition = 3, CacheFailure = 4 };

struct PreconditionError : std::domain_error {
    using std::domain_error::domain_error;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::vector<Rational> rationals(const std::string& s, std::size_t n, const char* what) {
    auto parts = split(s);
    if (parts.size() != n)
        throw ParseError(std::string(what) + " needs " + std::to_string(n) + " comma-separated values, got '" + s + "'");
    std::vector<Rational> out;
    for (const auto& p : parts) out.push_back(Rational::parse(p));
    return out;
}

long long integer(const Rational& q, const char* what) {
    if (!q.is_integer()) throw ParseError(std::string(what) + " must be an integer, got " + q.str());
    return q.to_ll();
}

Character parse_character(const std::string& s) {
    auto q = rationals(s, 4, "character r,a,b,ch2");
    Character v{integer(q[0], "rank"), integer(q[1], "a"), integer(q[2], "b"), q[3]};
    if (v.r <= 0) throw ParseError("rank must be positive");
    return v;
}

Divisor parse_slope(const std::string& s) {
    auto q = rationals(s, 2, "slope x,y");
    return {q[0], q[1]};
}

Rational parse_m(const std::string& s) {
    Rational m = Rational::parse(s);
    if (m.sign() <= 0) throw ParseError("polarization parameter m must be positive");
    return m;
}

void require_integral(const Character& v, int e) {
    if (!v.is_integral(e)) throw ParseError(v.str() + " is not an integral character on F_" + std::to_string(e) +
                                            " (c2 = " + v.c2(e).str() + ")");
}

void require_del_pezzo(int e, const char* cmd) {
    if (e != 0 && e != 1) throw ParseError(std::string(cmd) + " needs --e 0 or --e 1");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

struct Globals {
    std::string format;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string cache;
    bool no_cache = false;

    bool csv(const char* fallback = "json") const { return (format.empty() ? std::string(fallback) : format) == "csv"; }
    cli::CacheOptions cache_options() const { return {cli::resolve_cache_dir(cache, no_cache), jobs}; }
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// Character lifted back from F_{e mod 2} to F_e.
Character lift(Character v, int steps) {
    for (int s = 0; s < steps; ++s) v = pi_map(v, PiDirection::Up);
    return v;
}

BundleTag lift(BundleTag t, int steps) { return {t.r, t.a, t.b + steps * t.a}; }

void notice_reduction(int e) {
    std::cerr << "hirz: F_" << e << " is reduced to F_" << e % 2 << " (H_m on F_" << e << " is H_{m+" << e / 2
              << "} on F_" << e % 2 << ")\n";
}

// --- exceptional ---------------------------------------------------------

struct ExceptionalArgs {
    int e = 0;
    long long max_rank = 0;
    bool rejected = false;
};

int cmd_exceptional(const Globals& g, const ExceptionalArgs& a) {
    if (a.max_rank < 1) throw ParseError("--max-rank must be at least 1");
    if (a.e < 0) throw ParseError("e must be nonnegative");
    const int e0 = a.e % 2, steps = a.e / 2;
    if (steps > 0) notice_reduction(a.e);
    ExceptionalTable t = a.rejected ? build_table(e0, a.max_rank, g.jobs)
                                    : cli::load_table(e0, a.max_rank, g.cache_options(), std::cerr);
    struct Row {
        Character ch;
        std::optional<Interval> interval;
        std::optional<BundleTag> w0, w1;
    };
    std::vector<Row> rows;
    for (const auto& rec : t.records) {
        if (rec.ch.r > a.max_rank) continue;
        Row row{lift(rec.ch, steps), rec.interval, rec.w0, rec.w1};
        for (int s = 0; s < steps && row.interval; ++s) {
            row.interval = interval_transport(*row.interval);
            row.w0.reset();
            if (row.w1) row.w1 = lift(*row.w1, 1);
        }
        if (!row.interval) row.w1.reset();
        rows.push_back(row);
    }
    auto tag = [](const std::optional<BundleTag>& w) { return w ? w->str() : std::string(); };
    if (g.csv()) {
        std::cout << "r,a,b,ch2,delta,lo,hi,w0,w1\n";
        for (const auto& row : rows) {
            std::string lo = row.interval ? row.interval->lo.str() : "empty";
            std::string hi = row.interval ? (row.interval->hi ? row.interval->hi->str() : "inf") : "empty";
            std::cout << row.ch.r << "," << row.ch.a << "," << row.ch.b << "," << row.ch.ch2 << ","
                      << row.ch.disc(a.e) << "," << lo << "," << hi << "," << csv_field(tag(row.w0)) << ","
                      << csv_field(tag(row.w1)) << "\n";
        }
        return Ok;
    }
    json out = {{"e", a.e}, {"max_rank", a.max_rank}};
    json recs = json::array();
    for (const auto& row : rows) {
        json j;
        if (row.interval) {
            j = to_json(ExceptionalRecord{row.ch, *row.interval, row.w0, row.w1}, a.e);
        } else {
            j = {{"character", to_json(row.ch, a.e)}, {"lo", nullptr}, {"hi", nullptr},
                 {"w0", nullptr}, {"w1", nullptr}, {"empty", true}};
        }
        recs.push_back(j);
    }
    out["records"] = recs;
    if (a.rejected) {
        json rej = json::array();
        for (const auto& r : t.rejected)
            if (r.ch.r <= a.max_rank) rej.push_back({{"character", to_json(lift(r.ch, steps), a.e)}, {"reason", r.reason}});
        out["rejected"] = rej;
    }
    print_json(out);
    return Ok;
}

// --- exists / hn / reduce -----------------------------------------------

struct DecisionArgs {
    int e = 0;
    std::string v, m;
    bool direct = false;
};

void print_factors_csv(const char* verdict, const std::optional<HNDecomposition>& hn, int e) {
    std::cout << "verdict,factor,r,a,b,ch2,delta\n";
    if (!hn || hn->factors.empty()) {
        std::cout << verdict << ",,,,,,\n";
        return;
    }
    for (std::size_t i = 0; i < hn->factors.size(); ++i) {
        const auto& f = hn->factors[i];
        std::cout << verdict << "," << i + 1 << "," << f.r << "," << f.a << "," << f.b << "," << f.ch2 << ","
                  << f.disc(e) << "\n";
    }
}

int cmd_exists(const Globals& g, const DecisionArgs& a) {
    if (a.e < 0) throw ParseError("e must be nonnegative");
    Character v = parse_character(a.v);
    Rational m = parse_m(a.m);
    require_integral(v, a.e);
    DecisionCertificate cert;
    std::optional<ReductionTrace> trace;
    if (a.e >= 2 && !a.direct) {
        notice_reduction(a.e);
        auto rd = reduce_decision(v, a.e, m);
        cert = rd.certificate;
        trace = rd.trace;
    } else {
        cert = moduli_nonempty(v, m, a.e);
    }
    if (g.csv()) {
        print_factors_csv(verdict_name(cert.verdict), cert.hn, a.e);
    } else {
        json out = to_json(cert);
        out["e"] = a.e;
        out["m"] = to_json(m);
        out["character"] = to_json(v, a.e);
        if (trace) out["trace"] = to_json(*trace);
        print_json(out);
    }
    return cert.verdict == Verdict::BogomolovViolation ? Precondition : Ok;
}

int cmd_hn(const Globals& g, const DecisionArgs& a) {
    if (a.e < 0) throw ParseError("e must be nonnegative");
    Character v = parse_character(a.v);
    Rational m = parse_m(a.m);
    require_integral(v, a.e);
    std::optional<HNDecomposition> hn;
    std::optional<ReductionTrace> trace;
    if (a.e >= 2 && !a.direct) {
        notice_reduction(a.e);
        trace = reduce(v, a.e, m);
        hn = hn_generic(trace->final_character, trace->final_m, trace->final_e);
        if (hn) {
            for (auto& f : hn->factors) f = lift(f, static_cast<int>(trace->steps.size()));
            hn->e = a.e;
            hn->m = m;
        }
    } else {
        hn = hn_generic(v, m, a.e);
    }
    const char* status = hn ? "OK" : verdict_name(Verdict::NoPrioritary);
    if (g.csv()) {
        print_factors_csv(status, hn, a.e);
        return Ok;
    }
    json out = {{"status", status}, {"e", a.e}, {"m", to_json(m)}, {"character", to_json(v, a.e)}};
    out["hn"] = hn ? to_json(*hn) : json(nullptr);
    if (trace) out["trace"] = to_json(*trace);
    print_json(out);
    return Ok;
}

struct ReduceArgs {
    int e = 2;
    std::string v, m, interval;
};

int cmd_reduce(const Globals& g, const ReduceArgs& a) {
    if (a.e < 2) throw ParseError("reduce needs --e at least 2");
    if (a.v.empty() && a.interval.empty()) throw ParseError("reduce needs --v with --m, or --interval");
    json out = {{"e", a.e}};
    std::vector<std::string> csv_rows;
    int code = Ok;
    if (!a.v.empty()) {
        if (a.m.empty()) throw ParseError("--v needs --m");
        Character v = parse_character(a.v);
        Rational m = parse_m(a.m);
        require_integral(v, a.e);
        auto rd = reduce_decision(v, a.e, m);
        out["character"] = to_json(v, a.e);
        out["m"] = to_json(m);
        out["trace"] = to_json(rd.trace);
        out["certificate"] = to_json(rd.certificate);
        const auto& fc = rd.trace.final_character;
        csv_rows.push_back("character," + std::to_string(fc.r) + "," + std::to_string(fc.a) + "," +
                           std::to_string(fc.b) + "," + fc.ch2.str() + "," + std::to_string(rd.trace.final_e) + "," +
                           rd.trace.final_m.str() + "," + verdict_name(rd.certificate.verdict));
        if (rd.certificate.verdict == Verdict::BogomolovViolation) code = Precondition;
    }
    if (!a.interval.empty()) {
        auto parts = split(a.interval);
        if (parts.size() != 2) throw ParseError("--interval needs lo,hi");
        Interval reduced{Rational::parse(parts[0]), std::nullopt};
        if (parts[1] != "inf") reduced.hi = Rational::parse(parts[1]);
        if (reduced.lo.sign() < 0 || (reduced.hi && *reduced.hi <= reduced.lo))
            throw ParseError("--interval must satisfy 0 <= lo < hi");
        // One transport per reduction step, from F_{e mod 2} up to F_e.
        std::optional<Interval> cur = reduced;
        for (int s = 0; s < a.e / 2 && cur; ++s) cur = interval_transport(*cur);
        out["reduced_interval"] = to_json(reduced);
        out["interval"] = cur ? to_json(*cur) : json(nullptr);
        std::string hi = cur ? (cur->hi ? cur->hi->str() : "inf") : "";
        csv_rows.push_back("interval," + (cur ? cur->lo.str() + "," + hi : std::string("empty,empty")) + ",,,,");
    }
    if (g.csv()) {
        std::cout << "kind,f1,f2,f3,f4,f5,f6,f7\n";
        for (const auto& r : csv_rows) std::cout << r << "\n";
    } else {
        print_json(out);
    }
    return code;
}

// --- dlp / delta / grid --------------------------------------------------

struct DlpArgs {
    int e = 0;
    std::string m, nu;
    long long below_rank = 0;
    bool line_bundles = false;
};

int cmd_dlp(const Globals& g, const DlpArgs& a) {
    require_del_pezzo(a.e, "dlp");
    Rational m = parse_m(a.m);
    Divisor nu = parse_slope(a.nu);
    if (a.line_bundles == (a.below_rank > 0)) throw ParseError("give exactly one of --below-rank R or --line-bundles");
    DlpValue val;
    if (a.line_bundles) {
        val = dlp_line_bundles(nu, m, a.e);
    } else {
        ExceptionalTable t = cli::load_table(a.e, a.below_rank - 1, g.cache_options(), std::cerr);
        val = dlp_below_rank(nu, m, a.e, a.below_rank, t);
    }
    if (g.csv()) {
        std::cout << "eps,phi,dlp\n" << nu.a << "," << nu.b << "," << (val.value ? val.value->str() : "-inf") << "\n";
        return Ok;
    }
    json out = to_json(val, a.e);
    out["e"] = a.e;
    out["m"] = to_json(m);
    out["nu"] = to_json(nu);
    if (!a.line_bundles) out["below_rank"] = a.below_rank;
    print_json(out);
    return Ok;
}

struct DeltaArgs {
    int e = 0;
    std::string m, nu;
    long long max_rank = 0;
};

int cmd_delta(const Globals& g, const DeltaArgs& a) {
    if (a.e < 0) throw ParseError("e must be nonnegative");
    if (a.max_rank < 1) throw ParseError("--max-rank must be at least 1");
    Rational m = parse_m(a.m);
    Divisor nu = parse_slope(a.nu);
    std::optional<ExceptionalTable> t;
    if (a.e <= 1) t = cli::load_table(a.e, a.max_rank - 1, g.cache_options(), std::cerr);
    DeltaBracket b = delta_estimate(nu, m, a.e, a.max_rank, t ? &*t : nullptr, g.jobs);
    if (g.csv()) {
        std::cout << "eps,phi,m,rank_cutoff,lower,upper\n"
                  << nu.a << "," << nu.b << "," << m << "," << a.max_rank << "," << b.lower << ","
                  << (b.upper ? b.upper->str() : "") << "\n";
        return Ok;
    }
    json out = to_json(b, a.e);
    out["e"] = a.e;
    print_json(out);
    return Ok;
}

struct GridArgs {
    int e = 0;
    std::string m, square;
    long long steps = 0, below_rank = 0;
};

int cmd_grid(const Globals& g, const GridArgs& a) {
    require_del_pezzo(a.e, "grid");
    Rational m = parse_m(a.m);
    auto q = rationals(a.square, 4, "square eps0,eps1,phi0,phi1");
    if (a.steps < 0) throw ParseError("--steps must be nonnegative");
    if (a.below_rank < 1) throw ParseError("--below-rank must be at least 1");
    ExceptionalTable t = cli::load_table(a.e, a.below_rank - 1, g.cache_options(), std::cerr);
    auto pts = dlp_grid(a.e, m, {q[0], q[1], q[2], q[3]}, a.steps, a.below_rank, t, g.jobs);
    if (g.csv("csv")) {
        std::cout << "eps,phi,delta\n";
        for (const auto& p : pts) std::cout << p.eps << "," << p.phi << "," << (p.value.value ? p.value.value->str() : "-inf") << "\n";
        return Ok;
    }
    json arr = json::array();
    for (const auto& p : pts)
        arr.push_back({{"eps", to_json(p.eps)}, {"phi", to_json(p.phi)},
                       {"delta", p.value.value ? to_json(*p.value.value) : json("-inf")}});
    print_json({{"e", a.e}, {"m", to_json(m)}, {"steps", a.steps}, {"below_rank", a.below_rank}, {"points", arr}});
    return Ok;
}

// --- kronecker -----------------------------------------------------------

struct KroneckerArgs {
    int e = 0;
    long long ell = 3;
    std::string params, m;
};

int cmd_kronecker(const Globals& g, const KroneckerArgs& a) {
    auto q = rationals(a.params, 4, "params a,b,c,d");
    KroneckerParams p{a.e, a.ell, integer(q[0], "a"), integer(q[1], "b"), integer(q[2], "c"), integer(q[3], "d")};
    if (auto why = admissibility_failure(p)) throw PreconditionError("inadmissible parameters: " + *why);
    auto ch = kronecker_characters(p);
    Rational mV = wall_mV(p);
    Rational m = a.m.empty() ? mV : parse_m(a.m);
    auto why = closed_form_failure(ch.v.nu(), m, p.e, p.ell);
    auto hn = kronecker_hn_check(p);
    if (g.csv()) {
        std::cout << "e,ell,a,b,c,d,m_V,m_K,m_L,m,delta,hn_ok,eps\n"
                  << p.e << "," << p.ell << "," << p.a << "," << p.b << "," << p.c << "," << p.d << "," << mV << ","
                  << wall_mK(p) << "," << wall_mL(p) << "," << m << ","
                  << (why ? std::string() : delta_closed_form(ch.v.nu(), m, p.e, p.ell).str()) << ","
                  << (hn.ok ? "true" : "false") << "," << (hn.ok ? hn.eps.str() : "") << "\n";
        return Ok;
    }
    json out = {{"e", p.e}, {"ell", p.ell}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d},
                {"k", to_json(ch.k, p.e)}, {"l", to_json(ch.l, p.e)}, {"v", to_json(ch.v, p.e)},
                {"m_V", to_json(mV)}, {"m_K", to_json(wall_mK(p))}, {"m_L", to_json(wall_mL(p))},
                {"m", to_json(m)}, {"in_triangle", in_triangle_R(ch.v.nu(), p.e, p.ell)}};
    if (why) {
        out["delta"] = nullptr;
        out["delta_unavailable"] = *why;
    } else {
        out["delta"] = to_json(delta_closed_form(ch.v.nu(), m, p.e, p.ell));
    }
    out["hn_check"] = {{"ok", hn.ok}, {"eps", hn.ok ? to_json(hn.eps) : json(nullptr)}};
    print_json(out);
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations for sheaves on Hirzebruch surfaces F_e"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--jobs", g.jobs, "Maximum worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--cache", g.cache, "Exceptional-table cache directory (default: $HIRZ_CACHE)");
    app.add_flag("--no-cache", g.no_cache, "Do not read or write the cache");

    ExceptionalArgs ex;
    auto* c_ex = app.add_subcommand("exceptional", "Exceptional bundles and stability intervals");
    c_ex->add_option("--e", ex.e, "Surface F_e")->required();
    c_ex->add_option("--max-rank", ex.max_rank, "Largest rank")->required();
    c_ex->add_flag("--rejected", ex.rejected, "Also list rejected characters (bypasses the cache)");

    DecisionArgs exi, hna;
    auto* c_exists = app.add_subcommand("exists", "Decide nonemptiness of the moduli space");
    auto* c_hn = app.add_subcommand("hn", "Generic Harder-Narasimhan filtration");
    for (auto [c, a] : {std::pair{c_exists, &exi}, std::pair{c_hn, &hna}}) {
        c->add_option("--e", a->e, "Surface F_e")->required();
        c->add_option("--v", a->v, "Character r,a,b,ch2")->required();
        c->add_option("--m", a->m, "Polarization parameter (p/q)")->required();
        c->add_flag("--direct", a->direct, "Skip the reduction to e in {0,1}");
    }

    DlpArgs dl;
    auto* c_dlp = app.add_subcommand("dlp", "Drezet-Le Potier bound at a slope");
    c_dlp->add_option("--e", dl.e, "Surface F_e")->required();
    c_dlp->add_option("--m", dl.m, "Polarization parameter")->required();
    c_dlp->add_option("--nu", dl.nu, "Slope x,y")->required();
    c_dlp->add_option("--below-rank", dl.below_rank, "Use exceptional bundles of rank < R");
    c_dlp->add_flag("--line-bundles", dl.line_bundles, "Use line bundles only");

    DeltaArgs de;
    auto* c_delta = app.add_subcommand("delta", "Bracket the sharp Bogomolov threshold");
    c_delta->add_option("--e", de.e, "Surface F_e")->required();
    c_delta->add_option("--m", de.m, "Polarization parameter")->required();
    c_delta->add_option("--nu", de.nu, "Slope x,y")->required();
    c_delta->add_option("--max-rank", de.max_rank, "Rank cutoff")->required();

    KroneckerArgs kr;
    auto* c_kr = app.add_subcommand("kronecker", "Kronecker-module construction");
    c_kr->add_option("--e", kr.e, "Surface F_e (0 or 1)")->required();
    c_kr->add_option("--ell", kr.ell, "Parameter l >= 3")->required();
    c_kr->add_option("--params", kr.params, "a,b,c,d")->required();
    c_kr->add_option("--m", kr.m, "Evaluate the closed form at m (default: the wall m_V)");

    ReduceArgs re;
    auto* c_re = app.add_subcommand("reduce", "Reduce a problem on F_e to F_0 or F_1");
    c_re->add_option("--e", re.e, "Surface F_e, e >= 2")->required();
    c_re->add_option("--v", re.v, "Character r,a,b,ch2");
    c_re->add_option("--m", re.m, "Polarization parameter");
    c_re->add_option("--interval", re.interval, "Stability interval lo,hi on F_{e mod 2} to transport");

    GridArgs gr;
    auto* c_gr = app.add_subcommand("grid", "DLP values on a grid of slopes");
    c_gr->add_option("--e", gr.e, "Surface F_e")->required();
    c_gr->add_option("--m", gr.m, "Polarization parameter")->required();
    c_gr->add_option("--square", gr.square, "eps0,eps1,phi0,phi1")->required();
    c_gr->add_option("--steps", gr.steps, "Subdivisions per side")->required();
    c_gr->add_option("--below-rank", gr.below_rank, "Use exceptional bundles of rank < R")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? Ok : BadInput;
    }

    try {
        if (c_ex->parsed()) return cmd_exceptional(g, ex);
        if (c_exists->parsed()) return cmd_exists(g, exi);
        if (c_hn->parsed()) return cmd_hn(g, hna);
        if (c_dlp->parsed()) return cmd_dlp(g, dl);
        if (c_delta->parsed()) return cmd_delta(g, de);
        if (c_kr->parsed()) return cmd_kronecker(g, kr);
        if (c_re->parsed()) return cmd_reduce(g, re);
        if (c_gr->parsed()) return cmd_grid(g, gr);
    } catch (const CacheError& err) {
        std::cerr << "hirz: cache error: " << err.what() << "\n";
        return CacheFailure;
    } catch (const ParseError& err) {
        std::cerr << "hirz: invalid input: " << err.what() << "\n";
        return BadInput;
    } catch (const IntegralityError& err) {
        std::cerr << "hirz: invalid input: " << err.what() << "\n";
        return BadInput;
    } catch (const BogomolovError& err) {
        std::cerr << "hirz: precondition violated: " << err.what() << "\n";
        return Precondition;
    } catch (const std::invalid_argument& err) {
        std::cerr << "hirz: invalid input: " << err.what() << "\n";
        return BadInput;
    } catch (const std::domain_error& err) {
        std::cerr << "hirz: precondition violated: " << err.what() << "\n";
        return Precondition;
    } catch (const std::exception& err) {
        std::cerr << "hirz: internal error: " << err.what() << "\n";
        return Internal;
    }
    return Internal;
}
