#include "mcx/epsilon.hpp"

namespace mcx {

namespace {

CycloNum q_power(long q, long e) {
    Int num = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) num *= q;
    return CycloNum(e < 0 ? Rat(1, num) : Rat(num));
}

long q_to(long q, long d) {
    long out = 1;
    for (long i = 0; i < d; ++i) out *= q;
    return out;
}

void need_alpha(const TameBlock& b) {
    if (!b.alpha_known)
        throw err("UnknownInvariantScalar", "block Frobenius scalar is not known");
}

// the inertia characters of one local datum, expanded into Frobenius
// conjugates, each tagged with its Jordan size
struct InertiaChar {
    Int e;
    Int mod;
    long n;
};

std::vector<InertiaChar> inertia_chars(const LocalData& L, long q) {
    long q_s = q_to(q, L.residue_degree);
    std::vector<InertiaChar> out;
    for (const auto& b : L.blocks) {
        Int mod = boost::multiprecision::pow(Int(q_s), (unsigned)b.l) - 1;
        Int e = b.chi.e % mod;
        for (long j = 0; j < b.l; ++j) {
            out.push_back({e, mod, b.n});
            e = e * q_s % mod;
        }
    }
    return out;
}

bool closed_under_inversion(const LocalData& L, long q) {
    auto cs = inertia_chars(L, q);
    std::vector<char> used(cs.size(), 0);
    for (size_t i = 0; i < cs.size(); ++i) {
        if (used[i]) continue;
        bool found = false;
        for (size_t j = i; j < cs.size(); ++j) {
            if (used[j] && j != i) continue;
            if (cs[j].mod != cs[i].mod || cs[j].n != cs[i].n) continue;
            if ((cs[i].e + cs[j].e) % cs[i].mod != 0) continue;
            used[i] = used[j] = 1;
            found = true;
            break;
        }
        if (!found) return false;
    }
    return true;
}

// the shape excluded by the quadratic preservation theorem: a translated
// quadratic Kummer sheaf
bool is_quadratic_kummer_translate(const SheafData& F, const MulChar& quad) {
    if (F.rank != 1 || F.singular.size() != 1) return false;
    const auto& [s, L] = F.singular.front();
    if (s.degree() != 1 || L.blocks.size() != 1) return false;
    const TameBlock& b = L.blocks.front();
    return b.n == 1 && b.l == 1 && b.chi == quad;
}

} // namespace

CycloNum epsilon0_block(const TameBlock& b, long q_s, const Conventions& cv) {
    need_alpha(b);
    CycloNum core = b.chi.at_minus_one() * gauss_sum(b.chi) * bottom_scalar(b, q_s, cv);
    return q_power(q_s, b.n * (b.n - 1) / 2) * (-core).pow(b.n);
}

CycloNum epsilon0_point(const LocalData& L, long q, const CycloNum& beta, const Conventions& cv) {
    long q_s = q_to(q, L.residue_degree);
    CycloNum out(1);
    for (const auto& b : twist_unramified(L, beta).blocks) out *= epsilon0_block(b, q_s, cv);
    return out;
}

CycloNum det_local(const LocalData& L, long q, const Conventions& cv) {
    long q_s = q_to(q, L.residue_degree);
    CycloNum out(1);
    for (const auto& b : L.blocks) {
        need_alpha(b);
        for (const auto& [chi, a] : gr_M(b, q_s, cv)) out *= a;
        if ((b.l - 1) * b.n % 2) out = -out;
    }
    return out;
}

CycloNum det_h1c(const SheafData& F, const MulChar& chi, long y_enc, const Conventions& cv) {
    validate_sheaf(F);
    if (!standard_situation(F, chi))
        throw err("NotStandardSituation", "infinity monodromy is not scalar chi");
    const Field& base = F.base();
    long q = base.q, r = F.rank, sumdeg = 0;
    for (const auto& [s, L] : F.singular) {
        if (eval_poly_over(base, s.poly, y_enc) == 0)
            throw err("PointInS", "determinant point must avoid the singular locus");
        sumdeg += s.degree();
    }
    auto it = F.stalk_det_hint.find(y_enc);
    if (it == F.stalk_det_hint.end())
        throw err("MissingStalkDet", "no stalk determinant hint at the evaluation point");
    long d = r * sumdeg;
    CycloNum acc = CycloNum((d + r) % 2 ? -1 : 1) * det_local(F.infinity, q, cv).inv() *
                   q_power(q, -r) * (-gauss_sum(chi)).pow(r) * it->second;
    for (const auto& [s, L] : F.singular) {
        long q_s = q_to(q, s.degree());
        CycloNum ksc = kummer_scalar_at(chi, base, s, y_enc);
        for (const auto& b : L.blocks) {
            need_alpha(b);
            CycloNum core = gauss_sum(b.chi) * bottom_scalar(b, q_s, cv) * ksc.pow(b.l);
            acc *= q_power(q_s, b.n * (b.n - 1) / 2) * (-core).pow(b.n);
        }
    }
    return acc;
}

CycloNum det_mc(const SheafData& F, const MulChar& chi, long y_enc, const Conventions& cv) {
    CycloNum h = det_h1c(F, chi, y_enc, cv);
    const Field& base = F.base();
    long q = base.q;
    // kernel of H^1_c ->> the middle stalk: the whole twisted infinity fiber
    // plus one invariant line per trivial-character block at finite points
    CycloNum corr = chi.at_minus_one().pow(F.rank) * det_local(F.infinity, q, cv);
    for (const auto& [s, L] : F.singular) {
        long q_s = q_to(q, s.degree());
        for (const auto& b : L.blocks) {
            if (!b.chi.trivial()) continue;
            need_alpha(b);
            CycloNum fac = bottom_scalar(b, q_s, cv) * kummer_scalar_at(chi, base, s, y_enc);
            corr *= s.degree() % 2 ? fac : -fac;
        }
    }
    return h * corr.inv();
}

QuadraticDetReport quadratic_det_check(const SheafData& F, const std::vector<long>& ys,
                                       const Conventions& cv) {
    const Field& base = F.base();
    if (base.q % 2 == 0)
        throw err("HypothesisFailed", "clause (i): the quadratic character needs odd order");
    MulChar quad{F.p, F.m, (base.q - 1) / 2};
    auto check_i_ii = [&](const SheafData& G, const char* which) {
        if (!standard_situation(G, quad))
            throw err("HypothesisFailed", std::string("clause (i): ") + which +
                                              " infinity monodromy is not scalar quadratic");
        for (const auto& [s, L] : G.singular)
            if (!closed_under_inversion(L, base.q))
                throw err("HypothesisFailed", std::string("clause (ii): ") + which +
                                                  " inertia characters are not closed under inversion");
    };
    check_i_ii(F, "input");
    if (is_quadratic_kummer_translate(F, quad))
        throw err("HypothesisFailed", "clause (i): input is a translated quadratic Kummer sheaf");
    QuadraticDetReport rep;
    if (F.stalk_det_hint.empty())
        throw err("MissingStalkDet", "no stalk determinants to check");
    for (const auto& [y, v] : F.stalk_det_hint) {
        auto sp = v.signed_power_of(base.q);
        if (!sp)
            throw err("HypothesisFailed",
                      "clause (iii): a stalk determinant is not a signed power of q");
        rep.input_dets.push_back({y, sp->first, sp->second});
    }
    check_i_ii(mc_sheaf(F, quad, cv), "output");
    for (long y : ys) {
        auto sp = det_mc(F, quad, y, cv).signed_power_of(base.q);
        if (!sp)
            throw err("HypothesisFailed",
                      "clause (iii): a convolution determinant is not a signed power of q");
        rep.output_dets.push_back({y, sp->first, sp->second});
    }
    return rep;
}

} // namespace mcx
