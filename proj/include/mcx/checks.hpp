#pragma once

#include <string>
#include <vector>

#include "mcx/epsilon.hpp"
#include "mcx/oracle.hpp"

namespace mcx {

struct CheckLine {
    std::string name;
    bool pass = false;
    long cases = 0;     // individual exact comparisons made
    std::string detail; // deterministic extra output, e.g. the pinned conventions
};

// Gauss/Jacobi identities over every q in {3,5,7,9,11,13,25,27,49}:
// character orthogonality, g(chi) g(chi^{-1}) = chi(-1) q, and the
// Jacobi-to-Gauss relation for all admissible pairs.
CheckLine check_gauss_jacobi(int threads);

// Epsilon-factor laws on generated blocks over q in {3,5,7,9}: direct-sum
// multiplicativity, Tate-twist scaling q_s^{-rank}, unramified-twist
// scaling beta^rank, and the Jordan-block closed form against the
// q^{n(n-1)/2} eps^n expansion of the bottom line.
CheckLine check_epsilon_laws(int threads);

// det_h1c and det_mc against the oracle's Newton-identity determinants on
// rank-1 Kummer-product configurations over q in {3,5,7,9}.
CheckLine check_determinant_oracle(int threads);

// mc_rank against oracle dimension/rank recovery plus invariant stalk
// traces of the convolution output at singular points over extensions
// k <= 4, on the same configurations.
CheckLine check_rank_local_data(int threads);

// Exactly one of the four convention combinations reproduces the oracle on
// instances whose convolution output carries unipotent J_2 blocks; reports
// the frozen combination.
CheckLine check_convention_pinning(int threads);

// quadratic_det_check instances over q in {3,5,7}: hypotheses hold, all
// middle determinants are signed q-powers, and the output re-passes.
CheckLine check_quadratic_preservation(int threads);

// MC_{chi^{-1}} MC_chi traces equal q^k times the input traces up to the
// geometric constant chi(-1), at >= 3 points per instance.
CheckLine check_involution(int threads);

struct CheckReport {
    std::vector<CheckLine> lines;
    bool all_pass() const;
    std::string text() const; // one deterministic line per check
};

CheckReport run_check_suite(int threads);

} // namespace mcx
