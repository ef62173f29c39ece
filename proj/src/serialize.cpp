#include "hirz/serialize.hpp"

namespace hirz {

namespace {

Verdict verdict_from_name(const std::string& s) {
    for (Verdict v : {Verdict::Nonempty, Verdict::Empty, Verdict::NoPrioritary, Verdict::BogomolovViolation})
        if (s == verdict_name(v)) return v;
    throw std::invalid_argument("unknown verdict " + s);
}

template <class T, class F>
json opt_json(const std::optional<T>& x, F f) {
    return x ? f(*x) : json(nullptr);
}

}  // namespace

json to_json(const Rational& q) { return q.str(); }

Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    return Rational::parse(j.get<std::string>());
}

json to_json(const Divisor& d) { return json::array({to_json(d.a), to_json(d.b)}); }

Divisor divisor_from_json(const json& j) { return {rational_from_json(j.at(0)), rational_from_json(j.at(1))}; }

json to_json(const Character& v, int e) {
    return {{"r", v.r}, {"a", v.a}, {"b", v.b}, {"ch2", to_json(v.ch2)},
            {"nu", to_json(v.nu())}, {"delta", to_json(v.disc(e))}};
}

Character character_from_json(const json& j) {
    return {j.at("r").get<long long>(), j.at("a").get<long long>(), j.at("b").get<long long>(),
            rational_from_json(j.at("ch2"))};
}

json to_json(const BundleTag& t) { return json::array({t.r, t.a, t.b}); }

BundleTag tag_from_json(const json& j) {
    return {j.at(0).get<long long>(), j.at(1).get<long long>(), j.at(2).get<long long>()};
}

json to_json(const Interval& i) {
    return {{"lo", to_json(i.lo)}, {"hi", i.hi ? to_json(*i.hi) : json("inf")}};
}

Interval interval_from_json(const json& j) {
    Interval i{rational_from_json(j.at("lo")), std::nullopt};
    if (j.at("hi") != "inf") i.hi = rational_from_json(j.at("hi"));
    return i;
}

json to_json(const ExceptionalRecord& rec, int e) {
    json j = to_json(rec.interval);
    j["character"] = to_json(rec.ch, e);
    j["w0"] = opt_json(rec.w0, [](const BundleTag& t) { return to_json(t); });
    j["w1"] = opt_json(rec.w1, [](const BundleTag& t) { return to_json(t); });
    return j;
}

ExceptionalRecord record_from_json(const json& j) {
    ExceptionalRecord rec{character_from_json(j.at("character")), interval_from_json(j), std::nullopt, std::nullopt};
    if (!j.at("w0").is_null()) rec.w0 = tag_from_json(j.at("w0"));
    if (!j.at("w1").is_null()) rec.w1 = tag_from_json(j.at("w1"));
    return rec;
}

json to_json(const HNDecomposition& hn) {
    json f = json::array();
    for (const auto& v : hn.factors) f.push_back(to_json(v, hn.e));
    return {{"e", hn.e}, {"m", to_json(hn.m)}, {"factors", f}};
}

HNDecomposition hn_from_json(const json& j) {
    HNDecomposition hn;
    hn.e = j.at("e").get<int>();
    hn.m = rational_from_json(j.at("m"));
    for (const auto& f : j.at("factors")) hn.factors.push_back(character_from_json(f));
    return hn;
}

json to_json(const DecisionCertificate& c) {
    json j = {{"verdict", verdict_name(c.verdict)}, {"wall_flag", c.wall_flag}};
    j["hn"] = c.hn ? to_json(*c.hn) : json(nullptr);
    return j;
}

DecisionCertificate certificate_from_json(const json& j) {
    DecisionCertificate c;
    c.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    c.wall_flag = j.at("wall_flag").get<bool>();
    if (!j.at("hn").is_null()) c.hn = hn_from_json(j.at("hn"));
    return c;
}

json to_json(const DlpValue& v, int e) {
    return {{"value", v.value ? to_json(*v.value) : json("-inf")},
            {"witness", opt_json(v.witness, [e](const Character& w) { return to_json(w, e); })},
            {"equal_slope_hit", v.equal_slope_hit}};
}

DlpValue dlp_from_json(const json& j) {
    DlpValue v;
    if (j.at("value") != "-inf") v.value = rational_from_json(j.at("value"));
    if (!j.at("witness").is_null()) v.witness = character_from_json(j.at("witness"));
    v.equal_slope_hit = j.at("equal_slope_hit").get<bool>();
    return v;
}

json to_json(const DeltaBracket& b, int e) {
    return {{"nu", to_json(b.nu)},
            {"m", to_json(b.m)},
            {"rank_cutoff", b.rank_cutoff},
            {"lower", to_json(b.lower)},
            {"upper", opt_json(b.upper, [](const Rational& q) { return to_json(q); })},
            {"witness", opt_json(b.witness, [e](const Character& w) { return to_json(w, e); })},
            {"wall_flag", b.wall_flag}};
}

DeltaBracket bracket_from_json(const json& j) {
    DeltaBracket b;
    b.nu = divisor_from_json(j.at("nu"));
    b.m = rational_from_json(j.at("m"));
    b.rank_cutoff = j.at("rank_cutoff").get<long long>();
    b.lower = rational_from_json(j.at("lower"));
    if (!j.at("upper").is_null()) b.upper = rational_from_json(j.at("upper"));
    if (!j.at("witness").is_null()) b.witness = character_from_json(j.at("witness"));
    b.wall_flag = j.at("wall_flag").get<bool>();
    return b;
}

json to_json(const ReductionTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"e_from", s.e_from}, {"e_to", s.e_to}, {"m_from", to_json(s.m_from)}, {"m_to", to_json(s.m_to)}});
    return {{"steps", steps},
            {"final_character", to_json(t.final_character, t.final_e)},
            {"final_e", t.final_e},
            {"final_m", to_json(t.final_m)}};
}

ReductionTrace trace_from_json(const json& j) {
    ReductionTrace t;
    for (const auto& s : j.at("steps"))
        t.steps.push_back({s.at("e_from").get<int>(), s.at("e_to").get<int>(), rational_from_json(s.at("m_from")),
                           rational_from_json(s.at("m_to"))});
    t.final_character = character_from_json(j.at("final_character"));
    t.final_e = j.at("final_e").get<int>();
    t.final_m = rational_from_json(j.at("final_m"));
    return t;
}

}  // namespace hirz
