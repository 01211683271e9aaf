#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcx/errors.hpp"

namespace mcx {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

long euler_phi(long n);

// Phi_N as integer coefficients, little-endian, computed by dividing x^N - 1
// by the cyclotomic polynomials of the proper divisors. Cached.
const std::vector<Int>& cyclotomic_poly(long n);

// Exact element of Q(zeta_N), stored as a sparse coefficient map in the power
// basis of Q[x]/Phi_N(x). Immutable value type; all arithmetic is exact.
class CycloNum {
public:
    CycloNum() : n_(1) {}
    explicit CycloNum(const Rat& r) : n_(1) {
        if (r != 0) c_[0] = r;
    }
    explicit CycloNum(long v) : CycloNum(Rat(v)) {}

    static CycloNum root_of_unity(long n, long k);
    // Builds sum_e counts[e] * zeta_N^e with a single reduction pass.
    static CycloNum from_root_counts(long n, const std::map<long, Rat>& counts);

    long conductor() const { return n_; }
    const std::map<long, Rat>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool is_rational() const;
    std::optional<Rat> as_rational() const;

    // Canonical injection Q(zeta_N) -> Q(zeta_M), N | M.
    CycloNum lifted(long m) const;

    friend CycloNum operator+(const CycloNum& a, const CycloNum& b);
    friend CycloNum operator-(const CycloNum& a, const CycloNum& b);
    friend CycloNum operator*(const CycloNum& a, const CycloNum& b);
    CycloNum operator-() const;
    CycloNum& operator+=(const CycloNum& o) { *this = *this + o; return *this; }
    CycloNum& operator*=(const CycloNum& o) { *this = *this * o; return *this; }

    CycloNum inv() const; // DivisionByZero on 0
    CycloNum conj() const;
    CycloNum pow(long e) const;

    bool operator==(const CycloNum& o) const;
    bool operator!=(const CycloNum& o) const { return !(*this == o); }

    // z == sign * q^m exactly? (m may be negative). ZeroInput on 0.
    std::optional<std::pair<int, long>> signed_power_of(long q) const;

    std::string str() const;
    // Diagnostics only; never used for equality decisions.
    std::complex<double> approx() const;

private:
    long n_;
    std::map<long, Rat> c_; // exponent -> coefficient, deg < phi(N), no zeros

    static CycloNum from_dense(long n, std::vector<Rat> dense);
    void shrink_();
};

inline CycloNum cyc(long v) { return CycloNum(v); }

// Elementary symmetric functions e_1..e_d of an eigenvalue multiset from
// its power sums p_1..p_d (Newton's identities); e_d is the determinant.
std::vector<CycloNum> newton_esf(const std::vector<CycloNum>& power_sums);

} // namespace mcx
