#pragma once

#include "mcx/localdata.hpp"

namespace mcx {

// Scalar inertial monodromy at infinity with character exactly chi,
// chi nontrivial over the base field.
bool standard_situation(const SheafData& F, const MulChar& chi);

// Rewrite of one block of the quotient local data at a point of residue
// degree rd under convolution with L_chi (chi over the base field):
//   chi_i not in {1, chi^{-1}}: (n, l, chi*chi_i, alpha * (-J(chi, chi_i)))
//   chi_i = 1:                  (n, 1, chi|_s, alpha)
//   chi_i = chi^{-1}:           (n, 1, 1, alpha * chi(-1)|_s)
// with chi restricted to the block's field by composition with the norm.
TameBlock mc_block(const TameBlock& b, const MulChar& chi, long residue_degree);

// d - sum_s deg(s) * #trivial blocks - [scalar infinity char == chi] * r,
// with d = r * sum_s deg(s); the chi-twist is unramified at infinity only
// in the standard situation, where the full fiber joins the kernel.
// Requires scalar monodromy at infinity (NotStandardSituation otherwise).
long mc_rank(const SheafData& F, const MulChar& chi);

// Blockwise rewrite of the invariant quotients by mc_block, invariant lines
// reattached or refilled; at infinity, scalar chi^{-1} in the standard
// situation, otherwise one maximal Jordan block with character sc * chi^{-1}.
SheafData mc_sheaf(const SheafData& F, const MulChar& chi, const Conventions& cv);

// Dimension of the centralizer of the tame local monodromy (Jordan blocks
// grouped by inertia character, standard pairwise-min count).
long centralizer_dim(const LocalData& L, long q);

// (2 - m) r^2 + sum_{s in S u inf} deg(s) dim Z_s, m = 1 + sum_S deg(s).
long rigidity_index(const SheafData& F);

} // namespace mcx
