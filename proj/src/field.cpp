#include "mcx/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace mcx {

namespace {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> out;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

// dense polynomials over F_p, little-endian
using Poly = std::vector<long>;

void ptrim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly pmod(Poly a, const Poly& f, long p) {
    // f monic
    while (a.size() >= f.size()) {
        long c = a.back();
        if (c != 0) {
            size_t off = a.size() - f.size();
            for (size_t j = 0; j < f.size(); ++j)
                a[off + j] = ((a[off + j] - c * f[j]) % p + p) % p;
        }
        a.pop_back();
        ptrim(a);
        if (a.empty()) break;
    }
    return a;
}

Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, long p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return pmod(std::move(c), f, p);
}

Poly ppowmod(Poly base, long e, const Poly& f, long p) {
    Poly acc{1};
    while (e > 0) {
        if (e & 1) acc = pmulmod(acc, base, f, p);
        base = pmulmod(base, base, f, p);
        e >>= 1;
    }
    return acc;
}

Poly pgcd(Poly a, Poly b, long p) {
    auto monic = [&](Poly& g) {
        if (g.empty()) return;
        long lead = g.back(), inv = 1;
        for (long t = 1; t < p; ++t)
            if (lead * t % p == 1) { inv = t; break; }
        for (auto& c : g) c = c * inv % p;
    };
    while (!b.empty()) {
        monic(b);
        Poly r = pmod(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool poly_irreducible(const Poly& f, long p) {
    long m = (long)f.size() - 1;
    if (m == 1) return true;
    Poly x{0, 1};
    // x^{p^j} mod f by iterated p-th powers
    std::vector<Poly> frob(m + 1);
    frob[0] = x;
    for (long j = 1; j <= m; ++j) frob[j] = ppowmod(frob[j - 1], p, f, p);
    Poly top = frob[m];
    // x^{p^m} == x
    Poly diff = top;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    ptrim(diff);
    if (!diff.empty()) return false;
    for (long ell : prime_factors(m)) {
        Poly d = frob[m / ell];
        if (d.size() < 2) d.resize(2, 0);
        d[1] = ((d[1] - 1) % p + p) % p;
        ptrim(d);
        Poly g = pgcd(f, d, p);
        if (g.size() != 1) return false;
    }
    return true;
}

std::vector<long> digits_of(long enc, long p, long m) {
    std::vector<long> d(m);
    for (long i = 0; i < m; ++i) {
        d[i] = enc % p;
        enc /= p;
    }
    return d;
}

} // namespace

Field::Field(long p_, long m_) : p(p_), m(m_) {
    q = 1;
    for (long i = 0; i < m; ++i) q *= p;
    // smallest-lexicographic monic irreducible of degree m: least lower part
    for (long lower = 0;; ++lower) {
        auto d = digits_of(lower, p, m);
        Poly f(d.begin(), d.end());
        f.resize(m + 1, 0);
        f[m] = 1;
        if (poly_irreducible(f, p)) {
            modulus.assign(f.begin(), f.end());
            break;
        }
    }
    // norm-compatibility constraints: the generator's norm to each maximal
    // subfield must be a conjugate of that subfield's generator; then every
    // embedding can take unit 1 and embedding triangles commute
    std::vector<std::pair<std::vector<long>, long>> constraints;
    for (long ell : prime_factors(m)) {
        const Field& sub = get_field(p, m / ell);
        // minimal polynomial of sub.gen over F_p, computed inside sub
        std::vector<long> mp{sub.neg(sub.gen), 1};
        long c = sub.gen;
        for (long j = 1; j < sub.m; ++j) {
            c = sub.pow(c, p);
            std::vector<long> nx(mp.size() + 1, 0);
            for (size_t i = 0; i < mp.size(); ++i) {
                nx[i + 1] = sub.add(nx[i + 1], mp[i]);
                nx[i] = sub.add(nx[i], sub.mul(mp[i], sub.neg(c)));
            }
            mp = std::move(nx);
        }
        for (long co : mp)
            if (co >= p) throw err("Internal", "minimal polynomial not over the prime field");
        constraints.emplace_back(std::move(mp), (q - 1) / (sub.q - 1));
    }
    // least-encoded generator satisfying the norm constraints
    auto factors = prime_factors(q - 1);
    gen = 0;
    for (long g = 2; g < q; ++g) {
        bool ok = true;
        for (const auto& [mp, step] : constraints) {
            long y = ppow_(g, step), acc = 0;
            for (long i = (long)mp.size() - 1; i >= 0; --i) acc = add(pmul_(acc, y), mp[i]);
            if (acc != 0) { ok = false; break; }
        }
        for (long ell : factors) {
            if (!ok) break;
            if (ppow_(g, (q - 1) / ell) == 1) ok = false;
        }
        if (ok) { gen = g; break; }
    }
    if (gen == 0 && q == 2) gen = 1;
    if (gen == 0) throw err("Internal", "no generator found");
    exp_.assign(q - 1, 0);
    log_.assign(q, -1);
    long acc = 1;
    for (long e = 0; e < q - 1; ++e) {
        exp_[e] = (int)acc;
        log_[acc] = (int)e;
        acc = pmul_(acc, gen);
    }
    // traces of the power basis; trace is F_p-linear
    trb_.assign(m, 0);
    for (long i = 0; i < m; ++i) {
        long y = 1;
        for (long k = 0; k < i; ++k) y *= p; // encoding of x^i
        long t = y, s = y;
        for (long j = 1; j < m; ++j) {
            t = ppow_(t, p);
            s = add(s, t);
        }
        if (s >= p) throw err("Internal", "trace not in the prime field");
        trb_[i] = (int)s;
    }
}

long Field::pmul_(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    auto da = digits_of(a, p, m), db = digits_of(b, p, m);
    std::vector<long> c(2 * m - 1, 0);
    for (long i = 0; i < m; ++i)
        if (da[i])
            for (long j = 0; j < m; ++j) c[i + j] = (c[i + j] + da[i] * db[j]) % p;
    for (long i = 2 * m - 2; i >= m; --i) {
        long v = c[i];
        if (v == 0) continue;
        c[i] = 0;
        for (long j = 0; j < m; ++j)
            c[i - m + j] = ((c[i - m + j] - v * modulus[j]) % p + p) % p;
    }
    long enc = 0;
    for (long i = m - 1; i >= 0; --i) enc = enc * p + c[i];
    return enc;
}

long Field::ppow_(long a, long k) const {
    long acc = 1;
    while (k > 0) {
        if (k & 1) acc = pmul_(acc, a);
        a = pmul_(a, a);
        k >>= 1;
    }
    return acc;
}

long Field::add(long a, long b) const {
    long enc = 0, mult = 1;
    for (long i = 0; i < m; ++i) {
        enc += (a % p + b % p) % p * mult;
        a /= p;
        b /= p;
        mult *= p;
    }
    return enc;
}

long Field::neg(long a) const {
    long enc = 0, mult = 1;
    for (long i = 0; i < m; ++i) {
        enc += (p - a % p) % p * mult;
        a /= p;
        mult *= p;
    }
    return enc;
}

long Field::mul(long a, long b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + (long)log_[b]) % (q - 1)];
}

long Field::inv(long a) const {
    if (a == 0) throw err("DivisionByZero", "field inverse of zero");
    return exp_[(q - 1 - log_[a]) % (q - 1)];
}

long Field::pow(long a, long k) const {
    if (a == 0) {
        if (k > 0) return 0;
        if (k == 0) return 1;
        throw err("DivisionByZero", "zero to a negative power");
    }
    long r = k % (q - 1);
    if (r < 0) r += q - 1;
    return exp_[(long)log_[a] * r % (q - 1)];
}

long Field::exp(long e) const {
    long r = e % (q - 1);
    if (r < 0) r += q - 1;
    return exp_[r];
}

long Field::dlog(long a) const {
    if (a == 0) throw err("DivisionByZero", "dlog of zero");
    return log_[a];
}

long Field::trace(long a) const {
    long t = 0;
    for (long i = 0; i < m; ++i) {
        t = (t + a % p * trb_[i]) % p;
        a /= p;
    }
    return t;
}

long Field::from_int(long c) const {
    long r = c % p;
    if (r < 0) r += p;
    return r;
}

FieldElem Field::wrap(long enc) const { return {p, m, enc == 0 ? -1 : (long)log_[enc]}; }

long Field::unwrap(const FieldElem& x) const {
    if (x.p != p || x.deg != m) throw err("DegreeMismatch", "element from a different field");
    return x.is_zero() ? 0 : exp_[x.e];
}

long Field::eval_poly(const std::vector<int>& coeffs, long x) const {
    long acc = 0;
    for (long i = (long)coeffs.size() - 1; i >= 0; --i)
        acc = add(mul(acc, x), from_int(coeffs[i]));
    return acc;
}

const Field& get_field(long p, long m) {
    // recursive: the constructor fetches subfields for the norm constraints
    static std::recursive_mutex mx;
    static std::map<std::pair<long, long>, std::unique_ptr<Field>> cache;
    if (!is_prime(p)) throw err("NotPrime", "field characteristic must be prime");
    if (m < 1) throw err("SizeLimitExceeded", "extension degree must be positive");
    long q = 1;
    for (long i = 0; i < m; ++i) {
        q *= p;
        if (q > kFieldSizeLimit) throw err("SizeLimitExceeded", "field size above the configured limit");
    }
    std::lock_guard<std::recursive_mutex> lk(mx);
    auto& slot = cache[{p, m}];
    if (!slot) slot.reset(new Field(p, m));
    return *slot;
}

Embedding::Embedding(long p_, long a_, long b_) : p(p_), a(a_), b(b_) {
    if (b % a != 0) throw err("DegreeMismatch", "no embedding between these degrees");
    const Field& big = get_field(p, b);
    const Field& sub = get_field(p, a);
    long qa = sub.q, qb = big.q;
    long step = (qb - 1) / (qa - 1);
    long root = -1;
    unit = 0;
    if (a == b) {
        unit = 1;
        emb_.assign(qa, 0);
        for (long c = 0; c < qa; ++c) emb_[c] = (int)c;
    } else if (a == 1) {
        root = 0; // unused; the prime field embeds as constants
        unit = sub.gen >= 2 ? big.dlog(sub.gen) / step % (qa - 1) : 0;
        if (qa > 2 && (long)big.dlog(sub.gen) % step != 0)
            throw err("Internal", "constant of wrong order");
        emb_.assign(qa, 0);
        for (long c = 0; c < qa; ++c) emb_[c] = (int)c;
    } else {
        long r0 = -1;
        for (long x = 0; x < qb; ++x)
            if (big.eval_poly(sub.modulus, x) == 0) { r0 = x; break; }
        if (r0 < 0) throw err("Internal", "modulus has no root in the extension");
        // pick the conjugate root whose induced unit is 1 if possible
        auto gen_digits = digits_of(sub.gen, p, a);
        std::vector<int> gpoly(gen_digits.begin(), gen_digits.end());
        long best_u = -1;
        long r = r0;
        for (long i = 0; i < a; ++i) {
            long img = big.eval_poly(gpoly, r);
            long L = big.dlog(img);
            if (L % step != 0) throw err("Internal", "embedded generator of wrong order");
            long u = L / step % (qa - 1);
            if (best_u < 0 || u == 1 || (best_u != 1 && u < best_u)) {
                best_u = u;
                root = r;
            }
            if (best_u == 1) break;
            r = big.pow(r, p);
        }
        unit = best_u;
        emb_.assign(qa, 0);
        for (long enc = 0; enc < qa; ++enc) {
            auto d = digits_of(enc, p, a);
            std::vector<int> poly(d.begin(), d.end());
            emb_[enc] = (int)big.eval_poly(poly, root);
        }
    }
    unemb_.assign(qb, -1);
    for (long enc = 0; enc < qa; ++enc) unemb_[emb_[enc]] = (int)enc;
}

long Embedding::embed(long sub_enc) const { return emb_[sub_enc]; }

long Embedding::unembed(long big_enc) const {
    long v = unemb_[big_enc];
    if (v < 0) throw err("NotInSubfield", "element outside the embedded subfield");
    return v;
}

const Embedding& get_embedding(long p, long a, long b) {
    static std::mutex mx;
    static std::map<std::tuple<long, long, long>, std::unique_ptr<Embedding>> cache;
    std::lock_guard<std::mutex> lk(mx);
    auto& slot = cache[{p, a, b}];
    if (!slot) slot.reset(new Embedding(p, a, b));
    return *slot;
}

FieldElem norm_down(const FieldElem& x, long subdeg) {
    if (x.deg == subdeg) return x;
    if (x.deg % subdeg != 0) throw err("DegreeMismatch", "norm target is not a subfield");
    const Field& big = get_field(x.p, x.deg);
    const Field& sub = get_field(x.p, subdeg);
    if (x.is_zero()) return sub.wrap(0);
    long step = (big.q - 1) / (sub.q - 1);
    long n_big = big.exp(x.e % (big.q - 1) * step % (big.q - 1));
    const Embedding& emb = get_embedding(x.p, subdeg, x.deg);
    return sub.wrap(emb.unembed(n_big));
}

long MulChar::field_order() const {
    long q = 1;
    for (long i = 0; i < deg; ++i) q *= p;
    return q;
}

bool MulChar::quadratic() const {
    long q = field_order();
    return q % 2 == 1 && e == (q - 1) / 2;
}

long MulChar::order() const {
    long q = field_order();
    return (q - 1) / std::gcd(e, q - 1);
}

MulChar MulChar::inverse() const {
    long q = field_order();
    return {p, deg, (q - 1 - e) % (q - 1)};
}

MulChar MulChar::times(const MulChar& o) const {
    if (o.p != p || o.deg != deg) throw err("DegreeMismatch", "characters of different fields");
    long q = field_order();
    return {p, deg, (e + o.e) % (q - 1)};
}

MulChar MulChar::pow(long k) const {
    long q = field_order();
    long r = k % (q - 1);
    if (r < 0) r += q - 1;
    return {p, deg, e * r % (q - 1)};
}

MulChar MulChar::pullback(long d) const {
    long q = field_order();
    long qd = 1;
    for (long i = 0; i < deg * d; ++i) {
        qd *= p;
        if (qd > kFieldSizeLimit) throw err("SizeLimitExceeded", "pullback field above the size limit");
    }
    long scale = (qd - 1) / (q - 1);
    // norm(big_gen) = small_gen^{unit^{-1}}, so plain exponent scaling only
    // matches chi o Norm when the embedding unit is 1
    long u = get_embedding(p, deg, deg * d).unit % (q - 1);
    long t = 1;
    if (q > 2) {
        // invert u mod q-1 by extended Euclid
        long r0 = q - 1, r1 = u, s0 = 0, s1 = 1;
        while (r1 != 0) {
            long k = r0 / r1;
            r0 -= k * r1;
            std::swap(r0, r1);
            s0 -= k * s1;
            std::swap(s0, s1);
        }
        t = ((s0 % (q - 1)) + (q - 1)) % (q - 1);
    }
    return {p, deg * d, e % (qd - 1) * t % (qd - 1) * scale % (qd - 1)};
}

CycloNum MulChar::at_minus_one() const {
    if (p == 2) return CycloNum(1);
    long q = field_order();
    long n = order(), er = e / std::gcd(e == 0 ? q - 1 : e, q - 1);
    return CycloNum::root_of_unity(n, er * (((q - 1) / 2) % n) % n);
}

CycloNum char_eval(const MulChar& chi, const FieldElem& x, bool trivial_at_zero) {
    if (x.p != chi.p || x.deg != chi.deg) throw err("DegreeMismatch", "character and element fields differ");
    if (x.is_zero()) {
        if (trivial_at_zero && chi.trivial()) return CycloNum(1);
        return CycloNum();
    }
    // values live in the small field Q(zeta_{ord(chi)})
    long q = chi.field_order();
    long d = std::gcd(chi.e == 0 ? q - 1 : chi.e, q - 1);
    long n = (q - 1) / d;
    return CycloNum::root_of_unity(n, (chi.e / d) * (x.e % n) % n);
}

CycloNum add_char_eval(const FieldElem& x) {
    const Field& F = get_field(x.p, x.deg);
    long enc = x.is_zero() ? 0 : F.exp(x.e);
    return CycloNum::root_of_unity(F.p, F.trace(enc));
}

CycloNum norm_and_char(const MulChar& chi, const FieldElem& x) {
    if (x.p != chi.p || x.deg % chi.deg != 0)
        throw err("DegreeMismatch", "element field is not an extension of the character field");
    if (x.is_zero()) return CycloNum();
    return char_eval(chi, norm_down(x, chi.deg));
}

} // namespace mcx
