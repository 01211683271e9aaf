#include "mcx/cyclo.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace mcx {

long euler_phi(long n) {
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

namespace {

// quotient of a by monic b over Z, exact (remainder must vanish)
std::vector<Int> exact_div(std::vector<Int> a, const std::vector<Int>& b) {
    std::vector<Int> q(a.size() - b.size() + 1);
    for (long i = (long)q.size() - 1; i >= 0; --i) {
        Int c = a[i + b.size() - 1];
        q[i] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
    }
    for (const Int& c : a)
        if (c != 0) throw err("Internal", "inexact cyclotomic division");
    return q;
}

std::mutex phi_mutex;
std::unordered_map<long, std::vector<Int>> phi_cache;

std::vector<Int> compute_cyclotomic(long n) {
    // x^n - 1
    std::vector<Int> acc(n + 1);
    acc[0] = -1;
    acc[n] = 1;
    for (long d = 1; d < n; ++d)
        if (n % d == 0) acc = exact_div(std::move(acc), cyclotomic_poly(d));
    return acc;
}

} // namespace

const std::vector<Int>& cyclotomic_poly(long n) {
    {
        std::lock_guard<std::mutex> lk(phi_mutex);
        auto it = phi_cache.find(n);
        if (it != phi_cache.end()) return it->second;
    }
    auto poly = compute_cyclotomic(n);
    std::lock_guard<std::mutex> lk(phi_mutex);
    return phi_cache.emplace(n, std::move(poly)).first->second;
}

CycloNum CycloNum::from_dense(long n, std::vector<Rat> dense) {
    const auto& phi = cyclotomic_poly(n);
    const size_t deg = phi.size() - 1;
    // remainder mod the monic Phi_N
    for (long i = (long)dense.size() - 1; i >= (long)deg; --i) {
        Rat c = dense[i];
        if (c == 0) continue;
        dense[i] = 0;
        for (size_t j = 0; j < deg; ++j)
            if (phi[j] != 0) dense[i - deg + j] -= c * Rat(phi[j]);
    }
    CycloNum out;
    out.n_ = n;
    for (size_t i = 0; i < dense.size() && i < deg; ++i)
        if (dense[i] != 0) out.c_[(long)i] = dense[i];
    out.shrink_();
    return out;
}

void CycloNum::shrink_() {
    if (n_ != 1 && (c_.empty() || (c_.size() == 1 && c_.begin()->first == 0))) {
        n_ = 1; // rational values live in Q(zeta_1)
    }
}

CycloNum CycloNum::root_of_unity(long n, long k) {
    k %= n;
    if (k < 0) k += n;
    std::vector<Rat> dense(k + 1);
    dense[k] = 1;
    return from_dense(n, std::move(dense));
}

CycloNum CycloNum::from_root_counts(long n, const std::map<long, Rat>& counts) {
    std::vector<Rat> dense(n);
    for (const auto& [e, c] : counts) {
        long k = e % n;
        if (k < 0) k += n;
        dense[k] += c;
    }
    return from_dense(n, std::move(dense));
}

bool CycloNum::is_rational() const {
    return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0);
}

std::optional<Rat> CycloNum::as_rational() const {
    if (c_.empty()) return Rat(0);
    if (is_rational()) return c_.begin()->second;
    return std::nullopt;
}

CycloNum CycloNum::lifted(long m) const {
    if (m == n_) return *this;
    if (m % n_ != 0) throw err("Internal", "conductor lift must be a multiple");
    long scale = m / n_;
    std::vector<Rat> dense;
    for (const auto& [e, c] : c_) {
        size_t idx = (size_t)(e * scale);
        if (dense.size() <= idx) dense.resize(idx + 1);
        dense[idx] = c;
    }
    if (dense.empty()) dense.resize(1);
    CycloNum out = from_dense(m, std::move(dense));
    out.n_ = m; // keep the target conductor even when the value is rational
    return out;
}

CycloNum operator+(const CycloNum& a, const CycloNum& b) {
    long m = std::lcm(a.n_, b.n_);
    CycloNum x = a.lifted(m), y = b.lifted(m);
    for (const auto& [e, c] : y.c_) {
        auto it = x.c_.find(e);
        if (it == x.c_.end()) {
            x.c_[e] = c;
        } else {
            it->second += c;
            if (it->second == 0) x.c_.erase(it);
        }
    }
    x.shrink_();
    return x;
}

CycloNum CycloNum::operator-() const {
    CycloNum out = *this;
    for (auto& [e, c] : out.c_) c = -c;
    return out;
}

CycloNum operator-(const CycloNum& a, const CycloNum& b) { return a + (-b); }

CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    if (a.is_zero() || b.is_zero()) return CycloNum();
    long m = std::lcm(a.n_, b.n_);
    CycloNum x = a.lifted(m), y = b.lifted(m);
    long deg = euler_phi(m);
    std::vector<Rat> dense(2 * deg);
    for (const auto& [e1, c1] : x.c_)
        for (const auto& [e2, c2] : y.c_) dense[e1 + e2] += c1 * c2;
    return CycloNum::from_dense(m, std::move(dense));
}

namespace {

using QP = std::vector<Rat>;

void trim(QP& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

} // namespace

CycloNum CycloNum::inv() const {
    if (is_zero()) throw err("DivisionByZero", "inverse of zero");
    if (auto r = as_rational()) return CycloNum(Rat(1) / *r);
    // extended Euclid in Q[x] against Phi_N
    const auto& phi_i = cyclotomic_poly(n_);
    QP r0(phi_i.begin(), phi_i.end());
    QP r1(euler_phi(n_), Rat(0));
    for (const auto& [e, c] : c_) r1[e] = c;
    trim(r1);
    QP s0{}, s1{Rat(1)}; // coefficients of *this in the Bezout combination
    while (true) {
        // r0 = q*r1 + r2
        QP q;
        QP rem = r0;
        q.assign(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, Rat(0));
        while (rem.size() >= r1.size() && !rem.empty()) {
            Rat c = rem.back() / r1.back();
            size_t off = rem.size() - r1.size();
            q[off] += c;
            for (size_t j = 0; j < r1.size(); ++j) rem[off + j] -= c * r1[j];
            trim(rem);
        }
        QP s2 = s0;
        // s2 = s0 - q*s1
        {
            QP qs(q.size() + s1.size(), Rat(0));
            for (size_t i = 0; i < q.size(); ++i)
                if (q[i] != 0)
                    for (size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
            trim(qs);
            if (s2.size() < qs.size()) s2.resize(qs.size());
            for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
            trim(s2);
        }
        if (rem.empty()) {
            // r1 is the gcd (a nonzero constant since Phi_N is coprime to us)
            if (r1.size() != 1) throw err("Internal", "element not a unit mod Phi_N");
            Rat g = r1[0];
            std::vector<Rat> dense(s1.size());
            for (size_t i = 0; i < s1.size(); ++i) dense[i] = s1[i] / g;
            if (dense.empty()) dense.resize(1);
            return from_dense(n_, std::move(dense));
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
}

CycloNum CycloNum::conj() const {
    std::vector<Rat> dense(n_);
    for (const auto& [e, c] : c_) dense[(n_ - e) % n_] += c;
    if (dense.empty()) dense.resize(1);
    return from_dense(n_, std::move(dense));
}

CycloNum CycloNum::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    CycloNum acc(1);
    CycloNum base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool CycloNum::operator==(const CycloNum& o) const {
    if (n_ == o.n_) return c_ == o.c_;
    long m = std::lcm(n_, o.n_);
    return lifted(m).c_ == o.lifted(m).c_;
}

std::optional<std::pair<int, long>> CycloNum::signed_power_of(long q) const {
    if (is_zero()) throw err("ZeroInput", "signed_power_of on zero");
    auto r = as_rational();
    if (!r) return std::nullopt;
    int sign = *r > 0 ? 1 : -1;
    Rat a = sign > 0 ? *r : -*r;
    Int num = numerator(a), den = denominator(a);
    if (den == 1) {
        long m = 0;
        Int v = num;
        while (v % q == 0) {
            v /= q;
            ++m;
        }
        if (v == 1) return std::make_pair(sign, m);
        return std::nullopt;
    }
    if (num == 1) {
        long m = 0;
        Int v = den;
        while (v % q == 0) {
            v /= q;
            ++m;
        }
        if (v == 1 && m > 0) return std::make_pair(sign, -m);
        return std::nullopt;
    }
    return std::nullopt;
}

std::vector<CycloNum> newton_esf(const std::vector<CycloNum>& p) {
    std::vector<CycloNum> e;
    for (size_t i = 1; i <= p.size(); ++i) {
        CycloNum acc(0);
        int sg = 1;
        for (size_t j = 1; j <= i; ++j) {
            CycloNum prev = j == i ? CycloNum(1) : e[i - j - 1];
            acc += CycloNum(Rat(sg)) * prev * p[j - 1];
            sg = -sg;
        }
        e.push_back(acc * CycloNum(Rat(1, (long)i)));
    }
    return e;
}

std::string CycloNum::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : c_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        if (e > 0) os << "*z" << n_ << "^" << e;
    }
    return os.str();
}

std::complex<double> CycloNum::approx() const {
    std::complex<double> out(0.0, 0.0);
    const double tau = 6.283185307179586476925287;
    for (const auto& [e, c] : c_) {
        double v = (double)numerator(c) / (double)denominator(c);
        out += v * std::polar(1.0, tau * (double)e / (double)n_);
    }
    return out;
}

} // namespace mcx
