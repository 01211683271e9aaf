#include "mcx/jsonio.hpp"

namespace mcx {

namespace {

[[noreturn]] void bad(const std::string& what) { throw err("SchemaError", what); }

long get_long(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer())
        bad(std::string("missing integer field ") + key);
    return j[key].get<long>();
}

const Json& get_field_j(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field ") + key);
    return j[key];
}

Int parse_int(const Json& j) {
    if (!j.is_string()) bad("big integers are decimal strings");
    try {
        return Int(j.get<std::string>());
    } catch (const std::exception&) {
        bad("malformed integer string");
    }
}

std::vector<long> parse_poly(const Json& j) {
    if (!j.is_array() || j.size() < 2) bad("point must be a coefficient array of degree >= 1");
    std::vector<long> poly;
    for (const auto& c : j) {
        if (!c.is_number_integer()) bad("point coefficients must be integers");
        poly.push_back(c.get<long>());
    }
    return poly;
}

Json block_to_json(const TameBlock& b) {
    Json j{{"n", b.n}, {"l", b.l}, {"chi_e", b.chi.e}};
    j["alpha"] = b.alpha_known ? cyclo_to_json(b.alpha) : Json();
    return j;
}

// chi of a block at a point of residue degree d lives over F_{q^{d l}}
TameBlock block_from_json(const Json& j, long p, long m, long d) {
    TameBlock b;
    b.n = get_long(j, "n");
    b.l = get_long(j, "l");
    if (b.n < 1 || b.l < 1) bad("block sizes must be positive");
    b.chi = MulChar{p, m * d * b.l, get_long(j, "chi_e")};
    const Json& a = get_field_j(j, "alpha");
    if (a.is_null()) {
        b.alpha = CycloNum(1);
        b.alpha_known = false;
    } else {
        b.alpha = cyclo_from_json(a);
    }
    return b;
}

Json blocks_to_json(const LocalData& L) {
    Json arr = Json::array();
    for (const auto& b : L.blocks) arr.push_back(block_to_json(b));
    return arr;
}

LocalData blocks_from_json(const Json& j, long p, long m, long d) {
    if (!j.is_array()) bad("blocks must be an array");
    LocalData L;
    L.residue_degree = d;
    for (const auto& bj : j) L.blocks.push_back(block_from_json(bj, p, m, d));
    return L;
}

} // namespace

Json cyclo_to_json(const CycloNum& z) {
    Json terms = Json::array();
    for (const auto& [e, c] : z.coeffs())
        terms.push_back(Json::array(
            {e, numerator(c).str(), denominator(c).str()}));
    return Json{{"N", z.conductor()}, {"terms", std::move(terms)}};
}

CycloNum cyclo_from_json(const Json& j) {
    long n = get_long(j, "N");
    if (n < 1) bad("conductor must be positive");
    const Json& terms = get_field_j(j, "terms");
    if (!terms.is_array()) bad("terms must be an array");
    std::map<long, Rat> counts;
    for (const auto& t : terms) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer())
            bad("each term is [exponent, numerator, denominator]");
        Int num = parse_int(t[1]), den = parse_int(t[2]);
        if (den == 0) bad("zero denominator");
        counts[t[0].get<long>()] += Rat(num, den);
    }
    return CycloNum::from_root_counts(n, counts);
}

Json approx_to_json(const CycloNum& z) {
    auto c = z.approx();
    return Json{{"re", c.real()}, {"im", c.imag()}};
}

Json conventions_to_json(const Conventions& cv) {
    return Json{{"eigenspace_weight", cv.eigenspace_top ? "top" : "0"},
                {"quotient_twist", cv.quotient_twist}};
}

Conventions conventions_from_json(const Json& j) {
    Conventions cv;
    const Json& w = get_field_j(j, "eigenspace_weight");
    if (w == "top")
        cv.eigenspace_top = true;
    else if (w == "0")
        cv.eigenspace_top = false;
    else
        bad("eigenspace_weight must be \"0\" or \"top\"");
    long t = get_long(j, "quotient_twist");
    if (t != 0 && t != 1) bad("quotient_twist must be 0 or 1");
    cv.quotient_twist = (int)t;
    return cv;
}

Json sheaf_to_json(const SheafData& F) {
    Json j;
    j["base"] = Json{{"p", F.p}, {"m", F.m}};
    j["rank"] = F.rank;
    Json sing = Json::array();
    for (const auto& [s, L] : F.singular)
        sing.push_back(Json{{"point", s.poly}, {"blocks", blocks_to_json(L)}});
    j["singular"] = std::move(sing);
    j["infinity"] = Json{{"blocks", blocks_to_json(F.infinity)}};
    Json hints = Json::array();
    for (const auto& [y, v] : F.stalk_det_hint)
        hints.push_back(Json{{"y", y}, {"det", cyclo_to_json(v)}});
    j["stalk_det_hints"] = std::move(hints);
    return j;
}

SheafData sheaf_from_json(const Json& j) {
    const Json& base = get_field_j(j, "base");
    SheafData F;
    F.p = get_long(base, "p");
    F.m = get_long(base, "m");
    F.rank = get_long(j, "rank");
    const Json& sing = get_field_j(j, "singular");
    if (!sing.is_array()) bad("singular must be an array");
    for (const auto& sj : sing) {
        PointOrbit s{parse_poly(get_field_j(sj, "point"))};
        F.singular.emplace_back(
            s, blocks_from_json(get_field_j(sj, "blocks"), F.p, F.m, s.degree()));
    }
    F.infinity = blocks_from_json(get_field_j(get_field_j(j, "infinity"), "blocks"), F.p, F.m, 1);
    if (j.contains("stalk_det_hints")) {
        if (!j["stalk_det_hints"].is_array()) bad("stalk_det_hints must be an array");
        for (const auto& h : j["stalk_det_hints"])
            F.stalk_det_hint[get_long(h, "y")] = cyclo_from_json(get_field_j(h, "det"));
    }
    validate_sheaf(F);
    return F;
}

Json explicit_to_json(const ExplicitSheaf& E) {
    Json j;
    j["base"] = Json{{"p", E.p}, {"m", E.m}};
    Json factors = Json::array();
    for (const auto& f : E.factors)
        factors.push_back(Json{{"point", f.point.poly}, {"chi_e", f.eta.e}});
    j["factors"] = std::move(factors);
    j["constant"] = cyclo_to_json(E.constant);
    Json hist = Json::array();
    for (const auto& s : E.history)
        hist.push_back(Json{{"chi_e", s.chi.e}, {"constant", cyclo_to_json(s.constant)}});
    j["history"] = std::move(hist);
    return j;
}

ExplicitSheaf explicit_from_json(const Json& j) {
    const Json& base = get_field_j(j, "base");
    ExplicitSheaf E;
    E.p = get_long(base, "p");
    E.m = get_long(base, "m");
    const Json& factors = get_field_j(j, "factors");
    if (!factors.is_array()) bad("factors must be an array");
    for (const auto& f : factors)
        E.factors.push_back({PointOrbit{parse_poly(get_field_j(f, "point"))},
                             MulChar{E.p, E.m, get_long(f, "chi_e")}});
    if (j.contains("constant")) E.constant = cyclo_from_json(j["constant"]);
    if (j.contains("history")) {
        if (!j["history"].is_array()) bad("history must be an array");
        for (const auto& s : j["history"]) {
            ExplicitSheaf::Step step{MulChar{E.p, E.m, get_long(s, "chi_e")}, CycloNum(1)};
            if (s.contains("constant")) step.constant = cyclo_from_json(s["constant"]);
            E.history.push_back(std::move(step));
        }
    }
    validate_explicit(E);
    return E;
}

Json script_to_json(const std::vector<PipelineStep>& steps) {
    Json arr = Json::array();
    for (const auto& s : steps) {
        if (s.kind == PipelineStep::Kind::MiddleTensor)
            arr.push_back(Json{{"op", "mt"}, {"chi_e", s.chi.e}, {"point", s.point.poly}});
        else
            arr.push_back(Json{{"op", "mc"}, {"chi_e", s.chi.e}});
    }
    return arr;
}

std::vector<PipelineStep> script_from_json(const Json& j, long p, long m) {
    if (!j.is_array()) bad("script must be an array of steps");
    std::vector<PipelineStep> steps;
    for (const auto& s : j) {
        const Json& op = get_field_j(s, "op");
        PipelineStep step;
        step.chi = MulChar{p, m, get_long(s, "chi_e")};
        if (op == "mt") {
            step.kind = PipelineStep::Kind::MiddleTensor;
            step.point = PointOrbit{parse_poly(get_field_j(s, "point"))};
        } else if (op == "mc") {
            step.kind = PipelineStep::Kind::MiddleConvolution;
        } else {
            bad("op must be \"mt\" or \"mc\"");
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

Json parse_json(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) bad("malformed JSON");
    return j;
}

} // namespace mcx
