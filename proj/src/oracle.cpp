#include "mcx/oracle.hpp"

#include <numeric>

namespace mcx {

namespace {

long pow_within_limit(long q, long d) {
    long out = 1;
    for (long i = 0; i < d; ++i) {
        if (out > kFieldSizeLimit / q) return -1;
        out *= q;
    }
    return out;
}

} // namespace

const Field& ExplicitSheaf::base() const { return get_field(p, m); }

void validate_explicit(const ExplicitSheaf& E) {
    const Field& base = E.base();
    for (size_t i = 0; i < E.factors.size(); ++i) {
        const auto& [s, eta] = E.factors[i];
        if (!poly_irreducible_over(base, s.poly))
            throw err("InvalidPoint", "factor polynomial must be monic irreducible");
        if (eta.p != E.p || eta.deg != E.m)
            throw err("DegreeMismatch", "factor character must live on the base field");
        if (eta.trivial()) throw err("TrivialCharacter", "factor character must be nontrivial");
        for (size_t j = 0; j < i; ++j)
            if (E.factors[j].point.poly == s.poly)
                throw err("DuplicatePoint", "factor points must be distinct");
    }
    if (E.constant.is_zero()) throw err("ZeroScalar", "constant twist must be nonzero");
    for (const auto& st : E.history) {
        if (st.chi.p != E.p || st.chi.deg != E.m)
            throw err("DegreeMismatch", "convolution character must live on the base field");
        if (st.chi.trivial())
            throw err("TrivialCharacter", "convolution character must be nontrivial");
        if (st.constant.is_zero()) throw err("ZeroScalar", "step constant must be nonzero");
    }
}

SheafData kummer_local_data(const ExplicitSheaf& E) {
    validate_explicit(E);
    const Field& base = E.base();
    SheafData out;
    out.p = E.p;
    out.m = E.m;
    out.rank = 1;
    long e_inf = 0;
    for (size_t i = 0; i < E.factors.size(); ++i) {
        const auto& [s, eta] = E.factors[i];
        long d = s.degree();
        const Field& ks = get_field(E.p, E.m * d);
        const Embedding& em = get_embedding(E.p, E.m, E.m * d);
        long a = poly_roots_in(base, s.poly, d).front();
        // scalar on the eigenline: own factor through the derivative, the
        // other factors through their values at the root
        std::vector<long> dcoef;
        for (size_t j = 1; j < s.poly.size(); ++j) {
            long c = s.poly[j];
            for (long rep = 1; rep < (long)(j % E.p); ++rep) c = base.add(c, s.poly[j]);
            if (j % E.p == 0) c = 0;
            dcoef.push_back(c);
        }
        auto eval_in_ks = [&](const std::vector<long>& cf) {
            long acc = 0;
            for (long j = (long)cf.size() - 1; j >= 0; --j)
                acc = ks.add(ks.mul(acc, a), em.embed(cf[j]));
            return acc;
        };
        CycloNum alpha = char_eval(eta, norm_down(ks.wrap(eval_in_ks(dcoef)), E.m));
        for (size_t j = 0; j < E.factors.size(); ++j) {
            if (j == i) continue;
            alpha = alpha * char_eval(E.factors[j].eta,
                                      norm_down(ks.wrap(eval_in_ks(E.factors[j].point.poly)), E.m));
        }
        if (alpha.is_zero()) throw err("PointCollision", "factor points are not distinct");
        // Frob_s = Frob_q^deg(s), so the constant twist enters to that power
        alpha = alpha * E.constant.pow(d);
        LocalData L;
        L.residue_degree = d;
        L.blocks = {TameBlock{1, 1, eta.pullback(d), alpha, true}};
        out.singular.emplace_back(s, std::move(L));
        e_inf += eta.e * d;
    }
    long qm1 = base.q - 1;
    MulChar chi_inf{E.p, E.m, ((-e_inf) % qm1 + qm1) % qm1};
    out.infinity.residue_degree = 1;
    out.infinity.blocks = {TameBlock{1, 1, chi_inf, E.constant, true}};
    return out;
}

Oracle::Oracle(ExplicitSheaf E) : sheaf_(std::move(E)) {
    validate_explicit(sheaf_);
    for (const auto& f : sheaf_.factors) n0_ = std::lcm(n0_, f.eta.order());
    // scalar-character constituents at infinity whose Frobenius scalars are
    // NOT tracked: each non-standard step turns the non-kernel constituents
    // c of the previous level into c * chi^{-1} parts of unknown scalar
    u_chars_.assign(levels() + 1, {});
    for (long i = 1; i <= levels(); ++i) {
        const MulChar& chi = sheaf_.history[i - 1].chi;
        std::vector<MulChar> prev = u_chars_[i - 1];
        prev.push_back(infinity_char(i - 1));
        for (const auto& c : prev)
            if (!(c == chi)) u_chars_[i].push_back(c.times(chi.inverse()));
    }
}

const Oracle::Ctx& Oracle::ctx(long k) {
    auto it = ctx_.find(k);
    if (it != ctx_.end()) return it->second;
    Ctx c;
    c.F = &get_field(sheaf_.p, sheaf_.m * k);
    const Embedding& em = get_embedding(sheaf_.p, sheaf_.m, sheaf_.m * k);
    c.is_sing.assign(c.F->q, 0);
    for (const auto& f : sheaf_.factors) {
        c.poly_off.push_back((long)c.poly_cache_base.size());
        for (long cf : f.point.poly) c.poly_cache_base.push_back(em.embed(cf));
    }
    c.poly_off.push_back((long)c.poly_cache_base.size());
    for (size_t i = 0; i < sheaf_.factors.size(); ++i) {
        std::vector<long> roots;
        for (long x = 0; x < c.F->q; ++x)
            if (eval_point_poly(c, (long)i, x) == 0) {
                c.is_sing[x] = 1;
                roots.push_back(x);
            }
        c.roots.push_back(std::move(roots));
    }
    return ctx_.emplace(k, std::move(c)).first->second;
}

long Oracle::eval_point_poly(const Ctx& c, long f, long x_enc) const {
    long acc = 0;
    for (long j = c.poly_off[f + 1] - 1; j >= c.poly_off[f]; --j)
        acc = c.F->add(c.F->mul(acc, x_enc), c.poly_cache_base[j]);
    return acc;
}

Oracle::CharPull Oracle::pull(const MulChar& chi, long k) {
    if (chi.trivial()) return {1, 0};
    const Field& base = sheaf_.base();
    long v;
    if (k == 1) {
        v = 1; // norm is the identity
    } else {
        const Field& big = get_field(sheaf_.p, sheaf_.m * k);
        v = norm_down(big.wrap(big.gen), sheaf_.m).e;
    }
    long g = std::gcd(chi.e, base.q - 1), n = (base.q - 1) / g;
    return {n, (chi.e / g) % n * (v % n) % n};
}

const CycloNum& Oracle::root(long n, long j) {
    auto& v = roots_[n];
    if (v.empty())
        for (long i = 0; i < n; ++i) v.push_back(CycloNum::root_of_unity(n, i));
    return v[j % n];
}

const std::vector<long>& Oracle::table0(long k) {
    auto it = t0_.find(k);
    if (it != t0_.end()) return it->second;
    const Ctx& c = ctx(k);
    std::vector<CharPull> pulls;
    std::vector<long> scale;
    for (const auto& f : sheaf_.factors) {
        pulls.push_back(pull(f.eta, k));
        scale.push_back(n0_ / pulls.back().n);
    }
    std::vector<long> expo(c.F->q, 0);
    for (long x = 0; x < c.F->q; ++x) {
        long e = 0;
        for (size_t i = 0; i < pulls.size(); ++i) {
            long v = eval_point_poly(c, (long)i, x);
            if (v == 0) {
                e = -1;
                break;
            }
            e += scale[i] * (pulls[i].w * c.F->dlog(v) % pulls[i].n);
        }
        expo[x] = e < 0 ? -1 : e % n0_;
    }
    return t0_.emplace(k, std::move(expo)).first->second;
}

CycloNum Oracle::trace(long lvl, long k, long x_enc) {
    if (lvl < 0 || lvl > levels()) throw err("InvalidLevel", "no such convolution level");
    if (lvl == 0) {
        const auto& expo = table0(k);
        if (expo[x_enc] < 0) return CycloNum();
        return root(n0_, expo[x_enc]) * sheaf_.constant.pow(k);
    }
    auto key = std::array<long, 3>{lvl, k, x_enc};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto cached = tables_.find({lvl, k});
    if (cached != tables_.end()) return cached->second[x_enc];
    CycloNum t = (-raw_sum(lvl - 1, k, x_enc) - correction(lvl - 1, k, x_enc)) *
                 sheaf_.history[lvl - 1].constant.pow(k);
    memo_.emplace(key, t);
    return t;
}

// !-extension Lefschetz sum of the convolution of level prev with
// chi_{prev+1}(y - x); the caller negates
CycloNum Oracle::raw_sum(long prev, long k, long y_enc) {
    const Ctx& c = ctx(k);
    const MulChar& chi = sheaf_.history[prev].chi;
    CharPull pc = pull(chi, k);
    if (prev == 0) {
        const auto& expo = table0(k);
        long N = std::lcm(n0_, pc.n);
        long s0 = N / n0_, sc = N / pc.n;
        std::vector<long> counts(N, 0);
        for (long x = 0; x < c.F->q; ++x) {
            if (c.is_sing[x] || expo[x] < 0) continue;
            long v = c.F->sub(y_enc, x);
            if (v == 0) continue;
            ++counts[(s0 * expo[x] + sc * (pc.w * c.F->dlog(v) % pc.n)) % N];
        }
        std::map<long, Rat> m;
        for (long i = 0; i < N; ++i)
            if (counts[i]) m[i] = counts[i];
        return CycloNum::from_root_counts(N, m) * sheaf_.constant.pow(k);
    }
    const auto& tab = table(prev, k);
    CycloNum acc;
    for (long x = 0; x < c.F->q; ++x) {
        if (c.is_sing[x] || tab[x].is_zero()) continue;
        long v = c.F->sub(y_enc, x);
        if (v == 0) continue;
        acc = acc + tab[x] * root(pc.n, pc.w * c.F->dlog(v) % pc.n);
    }
    return acc;
}

// kernel of the !-to-middle quotient: invariant stalks at finite singular
// points twisted by chi(P_s(y)), plus the chi(-1)-twisted infinity part
CycloNum Oracle::correction(long prev, long k, long y_enc) {
    const Ctx& c = ctx(k);
    const MulChar& chi = sheaf_.history[prev].chi;
    CharPull pc = pull(chi, k);
    CycloNum corr;
    for (size_t i = 0; i < sheaf_.factors.size(); ++i) {
        // one term per root rational over this extension; conjugate roots
        // carry conjugate stalks, so the orbit cannot be collapsed
        for (long rt : c.roots[i]) {
            long v = c.F->sub(y_enc, rt);
            if (v == 0) continue;
            CycloNum stalk = trace(prev, k, rt);
            if (stalk.is_zero()) continue;
            corr = corr + root(pc.n, pc.w * c.F->dlog(v) % pc.n) * stalk;
        }
    }
    // the infinity invariants exist only when the chi-twist makes the
    // convolved sheaf unramified there (inertia character exactly chi)
    for (const auto& u : u_chars_[prev])
        if (u == chi)
            throw err("UnsupportedChain",
                      "infinity scalars left by a non-standard step are not tracked");
    if (infinity_char(prev) == chi)
        corr = corr + chi.at_minus_one().pow(k) * infinity_power_sum(prev, k);
    return corr;
}

MulChar Oracle::infinity_char(long lvl) const {
    if (lvl > 0) return sheaf_.history[lvl - 1].chi.inverse();
    long e = 0;
    for (const auto& f : sheaf_.factors) e += f.eta.e * f.point.degree();
    long qm1 = sheaf_.base().q - 1;
    return MulChar{sheaf_.p, sheaf_.m, ((-e) % qm1 + qm1) % qm1};
}

// power sums of the Frobenius eigenvalues at infinity: the constant scalar
// for the Kummer product, the middle H^1 of the previous level after a
// convolution
CycloNum Oracle::infinity_power_sum(long lvl, long k) {
    if (lvl == 0) return sheaf_.constant.pow(k);
    auto it = wsum_.find({lvl, k});
    if (it != wsum_.end()) return it->second;
    const Ctx& c = ctx(k);
    CycloNum acc;
    if (lvl == 1) {
        const auto& expo = table0(k);
        std::map<long, Rat> m;
        for (long x = 0; x < c.F->q; ++x)
            if (!c.is_sing[x] && expo[x] >= 0) m[expo[x]] += 1;
        acc = CycloNum::from_root_counts(n0_, m) * sheaf_.constant.pow(k);
    } else {
        // middle cohomology trace: the open-part sum plus the invariant
        // stalks at the singular points, which tab already holds there
        const auto& tab = table(lvl - 1, k);
        for (long x = 0; x < c.F->q; ++x) acc = acc + tab[x];
    }
    CycloNum w = -acc * sheaf_.history[lvl - 1].constant.pow(k);
    wsum_.emplace(std::make_pair(lvl, k), w);
    return w;
}

const std::vector<CycloNum>& Oracle::table(long lvl, long k) {
    auto it = tables_.find({lvl, k});
    if (it != tables_.end()) return it->second;
    const Ctx& c = ctx(k);
    CycloNum cst = sheaf_.history[lvl - 1].constant.pow(k);
    std::vector<CycloNum> tab(c.F->q);
    for (long y = 0; y < c.F->q; ++y)
        tab[y] = (-raw_sum(lvl - 1, k, y) - correction(lvl - 1, k, y)) * cst;
    return tables_.emplace(std::make_pair(lvl, k), std::move(tab)).first->second;
}

CycloNum Oracle::h1c_trace(long k, long y0_enc) {
    if (levels() == 0) throw err("NoConvolution", "history is empty");
    long y = y0_enc;
    if (k > 1) y = get_embedding(sheaf_.p, sheaf_.m, sheaf_.m * k).embed(y0_enc);
    return -raw_sum(levels() - 1, k, y);
}

std::vector<CycloNum> Oracle::charpoly(long y0_enc, long d) {
    if (pow_within_limit(sheaf_.base().q, d) < 0)
        throw err("DimensionOverflow", "dimension needs extension fields beyond the table limit");
    std::vector<CycloNum> p{CycloNum()};
    for (long k = 1; k <= d; ++k) p.push_back(h1c_trace(k, y0_enc));
    std::vector<CycloNum> e{CycloNum(1)};
    for (long i = 1; i <= d; ++i) {
        CycloNum acc;
        for (long j = 1; j <= i; ++j) {
            CycloNum term = e[i - j] * p[j];
            acc = (j % 2) ? acc + term : acc - term;
        }
        e.push_back(acc * CycloNum(Rat(1, i)));
    }
    e.erase(e.begin());
    return e;
}

CycloNum Oracle::h1c_det(long y0_enc, long d) { return charpoly(y0_enc, d).back(); }

long Oracle::newton_consistent(const std::vector<CycloNum>& p, long d_bound) {
    long kmax = (long)p.size() - 1;
    for (long d = 0; d <= std::min(d_bound, kmax - 1); ++d) {
        std::vector<CycloNum> e{CycloNum(1)};
        for (long i = 1; i <= d; ++i) {
            CycloNum acc;
            for (long j = 1; j <= i; ++j) {
                CycloNum term = e[i - j] * p[j];
                acc = (j % 2) ? acc + term : acc - term;
            }
            e.push_back(acc * CycloNum(Rat(1, i)));
        }
        bool ok = true;
        for (long k = d + 1; k <= kmax && ok; ++k) {
            CycloNum pred;
            for (long j = 1; j <= d; ++j) {
                CycloNum term = e[j] * p[k - j];
                pred = (j % 2) ? pred + term : pred - term;
            }
            if (!(pred == p[k])) ok = false;
        }
        if (ok) return d;
    }
    throw err("InconsistentTraces", "no dimension within the bound explains the traces");
}

long Oracle::recover_dimension(long y0_enc, long d_bound) {
    long kmax = 0;
    while (kmax < 2 * d_bound && pow_within_limit(sheaf_.base().q, kmax + 1) > 0) ++kmax;
    std::vector<CycloNum> p{CycloNum()};
    for (long k = 1; k <= kmax; ++k) p.push_back(h1c_trace(k, y0_enc));
    return newton_consistent(p, d_bound);
}

long Oracle::recover_rank(long lvl, long y0_enc, long d_bound) {
    if (lvl < 0 || lvl > levels()) throw err("InvalidLevel", "no such convolution level");
    long kmax = 0;
    while (kmax < 2 * d_bound && pow_within_limit(sheaf_.base().q, kmax + 1) > 0) ++kmax;
    std::vector<CycloNum> p{CycloNum()};
    for (long k = 1; k <= kmax; ++k) {
        long y = y0_enc;
        if (k > 1) y = get_embedding(sheaf_.p, sheaf_.m, sheaf_.m * k).embed(y0_enc);
        if (ctx(k).is_sing[y]) throw err("PointCollision", "rank recovery needs a nonsingular point");
        p.push_back(trace(lvl, k, y));
    }
    return newton_consistent(p, d_bound);
}

} // namespace mcx
