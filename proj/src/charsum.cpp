#include "mcx/charsum.hpp"

#include <map>
#include <numeric>

namespace mcx {

CycloNum gauss_sum(const MulChar& chi) {
    if (chi.trivial()) return CycloNum(1);
    const Field& F = get_field(chi.p, chi.deg);
    long Q = F.q, p = F.p;
    // chi(x)psi(x) = zeta_n^a zeta_p^b = zeta_N^{pa + nb}, n = ord(chi),
    // N = pn; keeping the conductor at the character order keeps the
    // cyclotomic arithmetic small
    long g = std::gcd(chi.e, Q - 1), n = (Q - 1) / g, er = chi.e / g;
    long N = p * n;
    std::map<long, Rat> counts;
    for (long e = 0; e < Q - 1; ++e) {
        long a = er * (e % n) % n;
        long b = F.trace(F.exp(e));
        counts[(p * a + n * b) % N] += 1;
    }
    return -CycloNum::from_root_counts(N, counts);
}

CycloNum jacobi_sum(const MulChar& chi, const MulChar& chi2) {
    if (chi.p != chi2.p || chi.deg != chi2.deg)
        throw err("DegreeMismatch", "Jacobi sum needs characters of one field");
    const Field& F = get_field(chi.p, chi.deg);
    long Q = F.q;
    long g = std::gcd(std::gcd(chi.e, chi2.e), Q - 1), n = (Q - 1) / g;
    std::map<long, Rat> counts;
    for (long a = 0; a < Q; ++a) {
        long b = F.sub(1, a);
        if (a == 0 || b == 0) continue; // chi(0) = 0 for every character
        counts[((chi.e / g) * (F.dlog(a) % n) + (chi2.e / g) * (F.dlog(b) % n)) % n] += 1;
    }
    return CycloNum::from_root_counts(n, counts);
}

bool gauss_pair_identity_check(const MulChar& chi) {
    if (chi.trivial()) throw err("TrivialCharacter", "identity holds for nontrivial characters");
    CycloNum lhs = gauss_sum(chi) * gauss_sum(chi.inverse());
    CycloNum rhs = chi.at_minus_one() * CycloNum(chi.field_order());
    return lhs == rhs;
}

} // namespace mcx
