#pragma once

#include <array>
#include <map>
#include <vector>

#include "mcx/localdata.hpp"

namespace mcx {

// Concrete rank-1 product of Kummer sheaves L_eta(P_s(x)) with an optional
// geometrically constant twist and a middle-convolution history. Ground
// truth: every trace is a brute-force character sum, exact in CycloNum.
struct ExplicitSheaf {
    struct Factor {
        PointOrbit point;
        MulChar eta; // nontrivial base-field character
    };
    struct Step {
        MulChar chi;                     // convolution character, nontrivial
        CycloNum constant = CycloNum(1); // post-step constant twist scalar
    };
    long p = 0;
    long m = 1;
    std::vector<Factor> factors;
    CycloNum constant = CycloNum(1);
    std::vector<Step> history;

    const Field& base() const;
};

// Errors: NotPrime, DegreeMismatch, InvalidPoint, DuplicatePoint,
// TrivialCharacter, ZeroScalar.
void validate_explicit(const ExplicitSheaf& E);

// Symbolic local data of the history-free part: rank 1, block
// (1,1,eta_s o N, alpha_s) at each factor point with
//   alpha_s = constant^{deg(s)} * eta_s(N(P_s'(a))) * prod_{j != s} eta_j(N(P_j(a))),
// infinity character (prod eta_j^{deg j})^{-1} with the constant twist as
// Frobenius scalar.
SheafData kummer_local_data(const ExplicitSheaf& E);

// Trace evaluator with per-extension caches. Level 0 is the Kummer product;
// level L is the L-th middle convolution of the history. Stalk traces at
// singular points are the inertia-invariant (middle extension) traces,
// computed by the same recursion: the !-sum against chi(y-x) minus the
// kernel terms (trivial-character invariant stalks at finite points and the
// chi(-1)-twisted infinity eigenvalues).
class Oracle {
public:
    explicit Oracle(ExplicitSheaf E);

    const ExplicitSheaf& sheaf() const { return sheaf_; }
    long levels() const { return (long)sheaf_.history.size(); }

    // Tr(Frob_{q^k}, stalk of level lvl at x), x encoded in F_{q^k}.
    CycloNum trace(long lvl, long k, long x_enc);

    // Tr(Frob_{q^k}, H^1_c) of the last convolution at base-rational y0:
    // the j_!-extension sum before any kernel subtraction.
    CycloNum h1c_trace(long k, long y0_enc);

    // Elementary symmetric functions e_1..e_d of the H^1_c Frobenius
    // eigenvalues at y0 via Newton's identities; e_d = det(Frob).
    // Errors: DimensionOverflow when q^d exceeds the field table limit.
    std::vector<CycloNum> charpoly(long y0_enc, long d);
    CycloNum h1c_det(long y0_enc, long d);

    // Smallest d <= d_bound whose Newton reconstruction from p_1..p_d
    // predicts every further computable power sum (up to 2*d_bound, capped
    // by the field table limit). Errors: InconsistentTraces.
    long recover_dimension(long y0_enc, long d_bound);

    // Same consistency recovery for the corrected (middle) trace system of
    // level lvl at a nonsingular base-rational point.
    long recover_rank(long lvl, long y0_enc, long d_bound);

private:
    // value of a base character through the true norm from F_{q^k}:
    // zeta_n^{w * dlog(x)}
    struct CharPull {
        long n = 1;
        long w = 0;
    };
    struct Ctx {
        const Field* F = nullptr;
        std::vector<char> is_sing;         // encoded singular locus of F_{q^k}
        std::vector<std::vector<long>> roots; // per factor, empty when inert
        std::vector<long> poly_cache_base; // flattened embedded coefficients
        std::vector<long> poly_off;
    };

    const Ctx& ctx(long k);
    CharPull pull(const MulChar& chi, long k);
    const CycloNum& root(long n, long j);
    const std::vector<long>& table0(long k); // exponents mod n0_, -1 at zeros
    const std::vector<CycloNum>& table(long lvl, long k);
    CycloNum raw_sum(long lvl, long k, long y_enc);  // !-sum of level lvl+1
    CycloNum correction(long lvl, long k, long y_enc);
    CycloNum infinity_power_sum(long lvl, long k); // W_k of level lvl
    MulChar infinity_char(long lvl) const;
    long eval_point_poly(const Ctx& c, long f, long x_enc) const;
    long newton_consistent(const std::vector<CycloNum>& p, long d_bound);

    ExplicitSheaf sheaf_;
    long n0_ = 1; // conductor of the history-free trace values
    std::vector<std::vector<MulChar>> u_chars_; // untracked infinity parts per level
    std::map<long, Ctx> ctx_;
    std::map<long, std::vector<long>> t0_;
    std::map<std::pair<long, long>, std::vector<CycloNum>> tables_;
    std::map<std::array<long, 3>, CycloNum> memo_;
    std::map<std::pair<long, long>, CycloNum> wsum_;
    std::map<long, std::vector<CycloNum>> roots_;
};

} // namespace mcx
