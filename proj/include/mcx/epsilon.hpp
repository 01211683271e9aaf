#pragma once

#include <vector>

#include "mcx/charsum.hpp"
#include "mcx/mc.hpp"

namespace mcx {

// Local epsilon factor of one indecomposable tame block at a point of
// residue cardinality q_s, with respect to a uniformizer differential:
//   q_s^{n(n-1)/2} * (-chi(-1) g(chi,psi) alpha)^n,
// alpha the bottom graded Frobenius scalar of the block. A trivial-character
// factor evaluates to -alpha. Errors: UnknownInvariantScalar.
CycloNum epsilon0_block(const TameBlock& b, long q_s, const Conventions& cv);

// Product of epsilon0_block over the blocks of twist_unramified(L, beta).
CycloNum epsilon0_point(const LocalData& L, long q, const CycloNum& beta, const Conventions& cv);

// det(Frob, full local stalk): product of all graded Frobenius scalars with
// the induction sign (-1)^{(l-1)n} per block; Kummer parts contribute 1.
CycloNum det_local(const LocalData& L, long q, const Conventions& cv);

// det(Frob_q, H^1_c(U_y, F (x) L_chi(y-x))) for base-rational y outside S
// and F in standard situation w.r.t. chi:
//   (-1)^{d+r} det(Frob_inf, F)^{-1} q^{-r} (-g(chi,psi))^r det(Frob_q, F_y)
//   * prod_{s in S} prod_blocks q_s^{n(n-1)/2}
//                              (-g(chi_i,psi) a_i chi(P_s(y))^{l_i})^{n_i}
// with d = r * sum_S deg(s) and a_i the bottom graded scalar of the block.
// det(Frob_q, F_y) is read from stalk_det_hint. Errors: NotStandardSituation,
// PointInS, MissingStalkDet, UnknownInvariantScalar.
CycloNum det_h1c(const SheafData& F, const MulChar& chi, long y_enc, const Conventions& cv);

// det(Frob_q, MC_chi(F)_y): det_h1c divided by the determinant of the
// kernel of H^1_c ->> MC_chi(F)_y, which is
//   chi(-1)^r det(Frob_inf, F)
//   * prod over trivial-character blocks at finite s of
//       (-1)^{deg(s)-1} a_inv chi(P_s(y)),
// a_inv the scalar on the invariant (bottom graded) line.
CycloNum det_mc(const SheafData& F, const MulChar& chi, long y_enc, const Conventions& cv);

// value == sign * q^m, exactly
struct SignedQPower {
    long y = 0;
    int sign = 1;
    long m = 0;
};

struct QuadraticDetReport {
    std::vector<SignedQPower> input_dets;  // hinted stalk determinants
    std::vector<SignedQPower> output_dets; // det_mc at the sampled points
};

// For odd q and the quadratic character: checks (i) scalar quadratic
// monodromy at infinity and F not a translated quadratic Kummer sheaf,
// (ii) the inertia character multiset at every finite singular point is
// closed under inversion, (iii) every hinted stalk determinant and every
// det_mc value at ys equals +-q^m; then re-checks (i) and (ii) on
// mc_sheaf(F). Errors: HypothesisFailed with the failing clause, plus the
// det_mc error set.
QuadraticDetReport quadratic_det_check(const SheafData& F, const std::vector<long>& ys,
                                       const Conventions& cv);

} // namespace mcx
