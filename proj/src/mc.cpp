#include "mcx/mc.hpp"

#include <algorithm>
#include <numeric>

#include "mcx/charsum.hpp"

namespace mcx {

namespace {

CycloNum q_power(long q, long e) {
    Int num = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) num *= q;
    return CycloNum(e < 0 ? Rat(1, num) : Rat(num));
}

// the shape excluded from the standard situation: a translated Kummer
// sheaf L_{chi^{-1}}(y - x), y rational
bool is_kummer_translate(const SheafData& F, const MulChar& chi) {
    if (F.rank != 1 || F.singular.size() != 1) return false;
    const auto& [s, L] = F.singular.front();
    if (s.degree() != 1 || L.blocks.size() != 1) return false;
    const TameBlock& b = L.blocks.front();
    return b.n == 1 && b.l == 1 && b.chi == chi.inverse();
}

} // namespace

bool standard_situation(const SheafData& F, const MulChar& chi) {
    if (chi.trivial() || chi.p != F.p || chi.deg != F.m) return false;
    auto sc = scalar_infinity_char(F);
    return sc.has_value() && *sc == chi;
}

TameBlock mc_block(const TameBlock& b, const MulChar& chi, long residue_degree) {
    if (chi.trivial()) throw err("TrivialConvolutionChar", "convolution character must be nontrivial");
    long rd = residue_degree;
    if (b.chi.trivial()) {
        // unipotent piece picks up the chi-twist, Frobenius scalar unchanged
        return {b.n, 1, chi.pullback(rd), b.alpha, b.alpha_known};
    }
    MulChar chi_restr = chi.pullback(rd * b.l);
    if (b.chi == chi_restr.inverse()) {
        if (b.l != 1) throw err("InvalidBlock", "norm-pulled character in an induced block");
        MulChar triv{chi.p, chi.deg * rd, 0};
        return {b.n, 1, triv, b.alpha * chi_restr.at_minus_one(), b.alpha_known};
    }
    return {b.n, b.l, chi_restr.times(b.chi), b.alpha * (-jacobi_sum(chi_restr, b.chi)),
            b.alpha_known};
}

long mc_rank(const SheafData& F, const MulChar& chi) {
    if (chi.trivial() || chi.p != F.p || chi.deg != F.m)
        throw err("NotStandardSituation", "convolution character must be nontrivial over the base");
    auto sc = scalar_infinity_char(F);
    if (!sc) throw err("NotStandardSituation", "infinity monodromy is not scalar");
    long d = 0, kernel = 0;
    for (const auto& [s, L] : F.singular) {
        d += F.rank * s.degree();
        kernel += s.degree() * L.invariant_dim();
    }
    // the chi-twist is unramified at infinity exactly when the scalar
    // character there equals chi; only then does the fiber join the kernel
    return d - kernel - (*sc == chi ? F.rank : 0);
}

SheafData mc_sheaf(const SheafData& F, const MulChar& chi, const Conventions& cv) {
    validate_sheaf(F);
    if (is_kummer_translate(F, chi)) throw err("ExcludedKummerTranslate", "input is a translated Kummer sheaf of the convolution character");
    long q = F.base().q;
    long r_out = mc_rank(F, chi);
    if (r_out < 1) throw err("Internal", "middle convolution has nonpositive rank");
    SheafData out;
    out.p = F.p;
    out.m = F.m;
    out.rank = r_out;
    for (const auto& [s, L] : F.singular) {
        long q_s = 1;
        for (long i = 0; i < s.degree(); ++i) q_s *= q;
        LocalData quo = quotient_by_invariants(L, q, cv);
        LocalData nl;
        nl.residue_degree = L.residue_degree;
        for (const auto& b : quo.blocks) {
            TameBlock nb = mc_block(b, chi, s.degree());
            if (nb.chi.trivial()) {
                // reattach the invariant line below the unipotent part; the
                // scalar stays on the new invariant line, so the stored
                // bottom value is unchanged
                nb.n += 1;
            }
            nl.blocks.push_back(std::move(nb));
        }
        long have = nl.rank();
        if (have > r_out) throw err("Internal", "local data exceeds the output rank");
        for (long i = have; i < r_out; ++i)
            nl.blocks.push_back(TameBlock{1, 1, MulChar{F.p, F.m * s.degree(), 0}, CycloNum(1), false});
        out.singular.emplace_back(s, std::move(nl));
    }
    out.infinity.residue_degree = 1;
    auto sc = scalar_infinity_char(F);
    if (*sc == chi) {
        // unramified twist at infinity: the output is scalar chi^{-1} there
        MulChar chi_out = chi.inverse();
        for (long i = 0; i < r_out; ++i)
            out.infinity.blocks.push_back(TameBlock{1, 1, chi_out, CycloNum(1), false});
    } else if (sc->trivial()) {
        // unramified input: everything lands in the chi^{-1} part; one
        // maximal Jordan block (the Legendre shape)
        out.infinity.blocks.push_back(TameBlock{r_out, 1, chi.inverse(), CycloNum(1), false});
    } else {
        // ramified non-standard: a chi^{-1} part of dimension r_out - r next
        // to the sc * chi^{-1} image of the old fiber (determinant balance)
        for (long i = 0; i < r_out - F.rank; ++i)
            out.infinity.blocks.push_back(TameBlock{1, 1, chi.inverse(), CycloNum(1), false});
        for (long i = std::max(r_out - F.rank, 0L); i < r_out; ++i)
            out.infinity.blocks.push_back(
                TameBlock{1, 1, sc->times(chi.inverse()), CycloNum(1), false});
    }
    return out;
}

long centralizer_dim(const LocalData& L, long q) {
    Int q_s = 1;
    for (long i = 0; i < L.residue_degree; ++i) q_s *= q;
    // expand every block into its l inertia characters, each carrying a
    // Jordan size; compare characters on tame inertia by lifting exponents
    struct IChar {
        long l;
        Int e;
        long n;
    };
    std::vector<IChar> chars;
    for (const auto& b : L.blocks) {
        Int mod = boost::multiprecision::pow(q_s, (unsigned)b.l) - 1;
        Int e = b.chi.e % mod;
        for (long k = 0; k < b.l; ++k) {
            chars.push_back({b.l, e, b.n});
            e = e * q_s % mod;
        }
    }
    auto same = [&](const IChar& a, const IChar& b) {
        long L2 = std::lcm(a.l, b.l);
        Int big = boost::multiprecision::pow(q_s, (unsigned)L2) - 1;
        Int ma = boost::multiprecision::pow(q_s, (unsigned)a.l) - 1;
        Int mb = boost::multiprecision::pow(q_s, (unsigned)b.l) - 1;
        return a.e * (big / ma) % big == b.e * (big / mb) % big;
    };
    long dim = 0;
    for (const auto& a : chars)
        for (const auto& b : chars)
            if (same(a, b)) dim += std::min(a.n, b.n);
    return dim;
}

long rigidity_index(const SheafData& F) {
    long q = F.base().q;
    long m = 1, z = centralizer_dim(F.infinity, q);
    for (const auto& [s, L] : F.singular) {
        m += s.degree();
        z += s.degree() * centralizer_dim(L, q);
    }
    return (2 - m) * F.rank * F.rank + z;
}

} // namespace mcx
