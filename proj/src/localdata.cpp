#include "mcx/localdata.hpp"

namespace mcx {

namespace {

// q^e as an exact rational, e possibly negative
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

} // namespace

long LocalData::rank() const {
    long r = 0;
    for (const auto& b : blocks) r += b.dim();
    return r;
}

long LocalData::invariant_dim() const {
    long d = 0;
    for (const auto& b : blocks)
        if (b.chi.trivial()) ++d;
    return d;
}

long eval_poly_over(const Field& base, const std::vector<long>& coeffs, long x_enc) {
    long acc = 0;
    for (long i = (long)coeffs.size() - 1; i >= 0; --i) acc = base.add(base.mul(acc, x_enc), coeffs[i]);
    return acc;
}

std::vector<long> poly_roots_in(const Field& base, const std::vector<long>& coeffs, long d) {
    std::vector<long> roots;
    if (d == 1) {
        for (long x = 0; x < base.q; ++x)
            if (eval_poly_over(base, coeffs, x) == 0) roots.push_back(x);
        return roots;
    }
    const Field& big = get_field(base.p, base.m * d);
    const Embedding& emb = get_embedding(base.p, base.m, base.m * d);
    for (long x = 0; x < big.q; ++x) {
        long acc = 0;
        for (long i = (long)coeffs.size() - 1; i >= 0; --i)
            acc = big.add(big.mul(acc, x), emb.embed(coeffs[i]));
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

bool poly_irreducible_over(const Field& base, const std::vector<long>& coeffs) {
    long d = (long)coeffs.size() - 1;
    if (d < 1 || coeffs.back() != 1) return false;
    if (d == 1) return true;
    if ((long)poly_roots_in(base, coeffs, d).size() != d) return false;
    for (long e = 1; e < d; ++e)
        if (d % e == 0 && !poly_roots_in(base, coeffs, e).empty()) return false;
    return true;
}

void validate_local(const LocalData& L, long p, long base_m) {
    for (const auto& b : L.blocks) {
        if (b.n < 1 || b.l < 1) throw err("InvalidBlock", "block sizes must be positive");
        if (b.chi.p != p || b.chi.deg != base_m * L.residue_degree * b.l)
            throw err("DegreeMismatch", "block character lives over the wrong field");
        if (b.chi.trivial() && b.l != 1)
            throw err("InvalidBlock", "trivial-character blocks must have l = 1");
        if (b.alpha_known && b.alpha.is_zero()) throw err("ZeroScalar", "Frobenius scalar must be nonzero");
    }
}

void validate_sheaf(const SheafData& F) {
    const Field& base = F.base();
    for (const auto& [s, L] : F.singular) {
        if (!poly_irreducible_over(base, s.poly))
            throw err("InvalidPoint", "closed point polynomial must be monic irreducible");
        if (s.degree() != L.residue_degree)
            throw err("DegreeMismatch", "point degree and local residue degree differ");
        validate_local(L, F.p, F.m);
        if (L.rank() != F.rank) throw err("RankMismatch", "local data must have full rank");
    }
    if (F.infinity.residue_degree != 1)
        throw err("DegreeMismatch", "infinity is a rational point");
    validate_local(F.infinity, F.p, F.m);
    if (F.infinity.rank() != F.rank) throw err("RankMismatch", "infinity data must have full rank");
}

std::optional<MulChar> scalar_infinity_char(const SheafData& F) {
    if (F.infinity.blocks.empty()) return std::nullopt;
    const MulChar& chi = F.infinity.blocks.front().chi;
    for (const auto& b : F.infinity.blocks)
        if (b.n != 1 || b.l != 1 || !(b.chi == chi)) return std::nullopt;
    return chi;
}

CycloNum bottom_scalar(const TameBlock& b, long q_s, const Conventions& cv) {
    if (!cv.eigenspace_top) return b.alpha;
    return b.alpha * q_power(q_s, -b.l * (b.n - 1));
}

std::vector<std::pair<MulChar, CycloNum>> gr_M(const TameBlock& b, long q_s, const Conventions& cv) {
    CycloNum a = bottom_scalar(b, q_s, cv);
    std::vector<std::pair<MulChar, CycloNum>> out;
    out.reserve(b.n);
    for (long j = 0; j < b.n; ++j) out.emplace_back(b.chi, a * q_power(q_s, b.l * j));
    return out;
}

LocalData quotient_by_invariants(const LocalData& L, long q, const Conventions& cv) {
    long q_s = q_to(q, L.residue_degree);
    LocalData out;
    out.residue_degree = L.residue_degree;
    for (const auto& b : L.blocks) {
        if (!b.chi.trivial()) {
            out.blocks.push_back(b);
            continue;
        }
        if (b.n == 1) continue; // fully invariant
        TameBlock nb = b;
        nb.n = b.n - 1;
        nb.alpha = b.alpha * q_power(q_s, cv.quotient_twist);
        out.blocks.push_back(std::move(nb));
    }
    return out;
}

LocalData tate_twist(const LocalData& L, long q, long m_twist) {
    long q_s = q_to(q, L.residue_degree);
    LocalData out = L;
    for (auto& b : out.blocks) b.alpha = b.alpha * q_power(q_s, -m_twist * b.l);
    return out;
}

CycloNum tate_twist(const CycloNum& a, long q, long m_twist) { return a * q_power(q, -m_twist); }

SheafData tate_twist(const SheafData& F, long m_twist) {
    long q = F.base().q;
    SheafData out = F;
    for (auto& [s, L] : out.singular) L = tate_twist(L, q, m_twist);
    out.infinity = tate_twist(F.infinity, q, m_twist);
    for (auto& [y, d] : out.stalk_det_hint) d = d * q_power(q, -m_twist * F.rank);
    return out;
}

LocalData twist_unramified(const LocalData& L, const CycloNum& beta) {
    if (beta.is_zero()) throw err("ZeroScalar", "unramified twist by zero");
    LocalData out = L;
    for (auto& b : out.blocks) b.alpha = b.alpha * beta.pow(b.l);
    return out;
}

CycloNum kummer_scalar_at(const MulChar& chi, const Field& base, const PointOrbit& s, long y0_enc,
                          int sign) {
    if (chi.p != base.p || chi.deg != base.m)
        throw err("DegreeMismatch", "Kummer character must live on the base field");
    long v = eval_poly_over(base, s.poly, y0_enc);
    if (v == 0) throw err("PointCollision", "evaluation point lies on the closed point");
    CycloNum out = char_eval(chi, base.wrap(v));
    if (sign < 0 && s.degree() % 2 == 1) out = out * chi.at_minus_one();
    return out;
}

} // namespace mcx
