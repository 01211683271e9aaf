#pragma once

#include <vector>

#include "mcx/cyclo.hpp"
#include "mcx/errors.hpp"

namespace mcx {

// q^l must stay within this bound; full dlog tables are precomputed.
inline constexpr long kFieldSizeLimit = 1L << 20;

// Element of F_{p^deg} as a discrete log relative to the field's fixed
// generator; e = -1 encodes zero.
struct FieldElem {
    long p = 0;
    long deg = 1;
    long e = -1;
    bool is_zero() const { return e < 0; }
    bool operator==(const FieldElem&) const = default;
};

// F_{p^m} with a deterministic modulus and generator. Elements are encoded
// as longs: the base-p digits of the encoding are the coefficients of the
// representative polynomial in F_p[x]/modulus.
class Field {
public:
    long p, m, q;
    std::vector<int> modulus; // little-endian over F_p, monic, size m + 1
    long gen;                 // encoded generator of the unit group

    long add(long a, long b) const;
    long neg(long a) const;
    long sub(long a, long b) const { return add(a, neg(b)); }
    long mul(long a, long b) const;
    long inv(long a) const; // DivisionByZero on 0
    long pow(long a, long k) const;
    long exp(long e) const;   // generator^e
    long dlog(long a) const;  // a != 0
    long trace(long a) const; // absolute trace down to F_p, in [0, p)
    long from_int(long c) const;

    FieldElem wrap(long enc) const;
    long unwrap(const FieldElem& x) const;

    // Evaluates a polynomial with F_p coefficients at an encoded point.
    long eval_poly(const std::vector<int>& coeffs, long x) const;

private:
    Field(long p, long m);
    long pmul_(long a, long b) const; // table-free product, used during setup
    long ppow_(long a, long k) const;

    std::vector<int> exp_, log_, trb_;

    friend const Field& get_field(long p, long m);
};

// Cached, deterministic. Errors: NotPrime, SizeLimitExceeded.
const Field& get_field(long p, long m);

// F_{p^a} -> F_{p^b} for a | b, as tables. The chosen embedding maps the
// small generator to big_gen^{unit * (q_b - 1)/(q_a - 1)} with unit = 1
// whenever some conjugate of the modulus root achieves it.
class Embedding {
public:
    long p, a, b;
    long unit;
    long embed(long sub_enc) const;
    long unembed(long big_enc) const; // NotInSubfield if not in the image

private:
    Embedding(long p, long a, long b);
    std::vector<int> emb_;
    std::vector<int> unemb_; // -1 outside the image

    friend const Embedding& get_embedding(long p, long a, long b);
};

const Embedding& get_embedding(long p, long a, long b);

// Norm of x in F_{p^b} down to F_{p^subdeg}, landed in the small field via
// the embedding tables.
FieldElem norm_down(const FieldElem& x, long subdeg);

// Multiplicative character of F_{p^deg}^x: chi(generator) = zeta_{Q-1}^e.
struct MulChar {
    long p = 0;
    long deg = 1;
    long e = 0;

    long field_order() const;
    bool trivial() const { return e == 0; }
    bool quadratic() const;
    long order() const;
    MulChar inverse() const;
    MulChar times(const MulChar& o) const; // DegreeMismatch
    MulChar pow(long k) const;
    // chi o Norm on F_{p^{deg*d}}, by exponent scaling.
    MulChar pullback(long d) const;
    CycloNum at_minus_one() const;
    bool operator==(const MulChar&) const = default;
};

// chi(x); chi(0) = 0 for every chi unless trivial_at_zero extends the
// trivial character by 1 there.
CycloNum char_eval(const MulChar& chi, const FieldElem& x, bool trivial_at_zero = false);

// zeta_p^{Tr(x)} with the absolute trace.
CycloNum add_char_eval(const FieldElem& x);

// chi(N(x)) for chi over F_{p^a} and x in an extension of it.
CycloNum norm_and_char(const MulChar& chi, const FieldElem& x);

} // namespace mcx
