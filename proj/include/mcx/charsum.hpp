#pragma once

#include "mcx/field.hpp"

namespace mcx {

// g(chi, psi) = -sum_{x in F^x} chi(x) psi(x), exact in Q(zeta_{p(Q-1)}).
// Returns 1 for trivial chi.
CycloNum gauss_sum(const MulChar& chi);

// J(chi, chi') = sum_{a in F} chi(a) chi'(1 - a), with chi(0) = 0.
CycloNum jacobi_sum(const MulChar& chi, const MulChar& chi2);

// g(chi) g(chi^{-1}) == chi(-1) * Q for nontrivial chi.
bool gauss_pair_identity_check(const MulChar& chi);

} // namespace mcx
