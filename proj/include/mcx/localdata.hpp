#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mcx/field.hpp"

namespace mcx {

// Conventions left open by the block-scalar normalization; pinned against
// the oracle by the acceptance suite.
struct Conventions {
    // false: the stored alpha is the Frobenius eigenvalue on the inertia
    // eigenspace placed at graded piece j = 0; true: at j = n - 1.
    bool eigenspace_top = false;
    // Tate twist picked up by a unipotent block when passing to the
    // quotient by invariants.
    int quotient_twist = 1;
};

// One indecomposable tame constituent J_n (x) Ind(L_chi (x) F) at a closed
// point of residue field F_Q; chi lives over the degree-l extension of F_Q,
// alpha is the Frobenius scalar of the unramified rank-1 twist F.
struct TameBlock {
    long n = 1;
    long l = 1;
    MulChar chi;
    CycloNum alpha = CycloNum(1);
    bool alpha_known = true;
    long dim() const { return n * l; }
};

struct LocalData {
    long residue_degree = 1; // deg(s) over the base field
    std::vector<TameBlock> blocks;
    long rank() const;
    long invariant_dim() const; // one eigenline per trivial-chi block
};

// Closed point of the affine line: monic irreducible polynomial with
// coefficients in the base field (encoded), little-endian.
struct PointOrbit {
    std::vector<long> poly;
    long degree() const { return (long)poly.size() - 1; }
};

struct SheafData {
    long p = 0;
    long m = 1; // base field F_q, q = p^m
    long rank = 0;
    std::vector<std::pair<PointOrbit, LocalData>> singular;
    LocalData infinity; // residue_degree 1
    std::map<long, CycloNum> stalk_det_hint; // encoded rational y -> det(Frob_q, F_y)
    const Field& base() const { return get_field(p, m); }
};

// Distinct roots of a monic base-coefficient polynomial inside F_{q^d},
// encoded in that extension.
std::vector<long> poly_roots_in(const Field& base, const std::vector<long>& coeffs, long d);
bool poly_irreducible_over(const Field& base, const std::vector<long>& coeffs);
long eval_poly_over(const Field& base, const std::vector<long>& coeffs, long x_enc);

// Structural checks: character degrees, trivial => l = 1, known alphas
// nonzero. Throws on violation.
void validate_local(const LocalData& L, long p, long base_m);
void validate_sheaf(const SheafData& F);

// The common scalar character at infinity if the data is scalar there.
std::optional<MulChar> scalar_infinity_char(const SheafData& F);

// Graded pieces of the monodromy filtration of one block: n pairs
// (chi, alpha_F * q_s^{l j}), with alpha_F read off per the convention.
std::vector<std::pair<MulChar, CycloNum>> gr_M(const TameBlock& b, long q_s, const Conventions& cv);

// Frobenius scalar on the bottom graded piece (j = 0) of the block.
CycloNum bottom_scalar(const TameBlock& b, long q_s, const Conventions& cv);

LocalData quotient_by_invariants(const LocalData& L, long q, const Conventions& cv);

LocalData tate_twist(const LocalData& L, long q, long m_twist);
SheafData tate_twist(const SheafData& F, long m_twist);
CycloNum tate_twist(const CycloNum& a, long q, long m_twist);

LocalData twist_unramified(const LocalData& L, const CycloNum& beta); // ZeroScalar

// chi(N_{k(s)/k}(y0 - x_s)) = chi(P_s(y0)) for the monic minimal polynomial;
// sign < 0 evaluates chi(N(x_s - y0)) instead. PointCollision when y0 is a
// root of P_s.
CycloNum kummer_scalar_at(const MulChar& chi, const Field& base, const PointOrbit& s, long y0_enc,
                          int sign = 1);

} // namespace mcx
