#pragma once

#include <optional>
#include <vector>

#include "mcx/epsilon.hpp"
#include "mcx/oracle.hpp"

namespace mcx {

// One step of a convolution pipeline: middle tensor with the translated
// Kummer sheaf L_chi(P_t(x)), or middle convolution MC_chi.
struct PipelineStep {
    enum class Kind { MiddleTensor, MiddleConvolution };
    Kind kind = Kind::MiddleConvolution;
    MulChar chi;
    PointOrbit point; // tensor steps only
};

// Symbolic local data plus, while representable, a concrete Kummer-product
// track whose brute-force traces cross-validate every step.
struct PipelineState {
    SheafData data;
    std::optional<ExplicitSheaf> concrete;
    Conventions cv;
    std::vector<long> samples; // encoded base-rational cross-check points
};

// Rank-1 sheaf with no singularities and trivial monodromy everywhere.
PipelineState initial_state(long p, long m, const Conventions& cv, std::vector<long> samples);

// Reconstructs the explicit Kummer product reproducing F exactly (rank 1,
// every block character pulled back from the base, all scalars matching
// kummer_local_data), if there is one.
std::optional<ExplicitSheaf> as_kummer_product(const SheafData& F);

// Middle tensor with L_eta(P_t(x)): at t multiply block characters by eta
// through the norm and scalars by eta(N(P_t'(x_t)))^l; at other finite
// points twist by the unramified scalar eta(N(P_t(x_s))); at infinity
// multiply the character by eta^{-deg t}. A point left with trivial
// monodromy is removed from S; scalars at a freshly ramified point are
// unknown unless F is a recognizable Kummer product. Stalk determinant
// hints are carried along, multiplied by eta(P_t(y))^rank.
SheafData middle_tensor(const SheafData& F, const MulChar& eta, const PointOrbit& t);

// Fills stalk determinant hints at the sample points and, for a scalar
// infinity datum with unknown scalars, their product (stored on the first
// unknown block; only the product is determinant-relevant) from the oracle
// track. No-op without the track.
void fill_from_oracle(PipelineState& st);

// Advances both tracks and cross-checks them exactly: structural equality
// of the symbolic data with the oracle's local data while no convolution
// has happened, recovered rank and middle determinants at the sample
// points after each convolution. CrossCheckFailed on any disagreement.
void apply_step(PipelineState& st, const PipelineStep& step);

struct AssociativityReport {
    bool rank_match = false;
    bool ratio_constant = false;
    CycloNum ratio = CycloNum(1); // two-step over one-step trace ratio
    std::vector<long> samples;    // points actually compared
};

// Report-only comparison of MC_chi2(MC_chi1(state)) against the single
// convolution MC_{chi1 chi2}(state), or against the Tate twist of the
// state when chi1 chi2 is trivial, on the oracle track: recovered ranks
// plus whether the trace ratio is one geometric constant.
AssociativityReport associativity_probe(const PipelineState& st, const MulChar& chi1,
                                        const MulChar& chi2, long d_bound = 4);

} // namespace mcx
