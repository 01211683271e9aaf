#include "mcx/pipeline.hpp"

namespace mcx {

namespace {

CycloNum q_power(long q, long e) {
    Int num = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) num *= q;
    return CycloNum(e < 0 ? Rat(1, num) : Rat(num));
}

long q_to(long q, long d) {
    long out = 1;
    for (long i = 0; i < d; ++i) out *= q;
    return out;
}

long embed_point(long p, long m, long k, long x_enc) {
    return k == 1 ? x_enc : get_embedding(p, m, m * k).embed(x_enc);
}

// eta(N(P'(a))) at the root a of P, same normalization as kummer_local_data
CycloNum derivative_scalar(const Field& base, const PointOrbit& t, const MulChar& eta) {
    long d = t.degree();
    const Field& kt = get_field(base.p, base.m * d);
    long a = poly_roots_in(base, t.poly, d).front();
    long acc = 0;
    for (long j = (long)t.poly.size() - 1; j >= 1; --j) {
        long c = 0;
        for (long rep = 0; rep < (long)(j % base.p); ++rep) c = base.add(c, t.poly[j]);
        long ce = d == 1 ? c : get_embedding(base.p, base.m, base.m * d).embed(c);
        acc = kt.add(kt.mul(acc, a), ce);
    }
    return norm_and_char(eta, kt.wrap(acc));
}

// eta(N_{k(s)/k}(P_t(x_s))), the unramified scalar the twist leaves at s
CycloNum point_value_scalar(const Field& base, const PointOrbit& s, const PointOrbit& t,
                            const MulChar& eta) {
    long ds = s.degree();
    const Field& ks = get_field(base.p, base.m * ds);
    long b0 = poly_roots_in(base, s.poly, ds).front();
    long acc = 0;
    for (long j = (long)t.poly.size() - 1; j >= 0; --j) {
        long ce = ds == 1 ? t.poly[j] : get_embedding(base.p, base.m, base.m * ds).embed(t.poly[j]);
        acc = ks.add(ks.mul(acc, b0), ce);
    }
    return norm_and_char(eta, ks.wrap(acc));
}

bool same_block(const TameBlock& a, const TameBlock& b) {
    if (a.n != b.n || a.l != b.l || !(a.chi == b.chi) || a.alpha_known != b.alpha_known)
        return false;
    return !a.alpha_known || a.alpha == b.alpha;
}

bool same_local(const LocalData& a, const LocalData& b) {
    if (a.residue_degree != b.residue_degree || a.blocks.size() != b.blocks.size()) return false;
    for (size_t i = 0; i < a.blocks.size(); ++i)
        if (!same_block(a.blocks[i], b.blocks[i])) return false;
    return true;
}

// structural equality up to the determinant hints
bool same_data(const SheafData& a, const SheafData& b) {
    if (a.p != b.p || a.m != b.m || a.rank != b.rank || a.singular.size() != b.singular.size())
        return false;
    for (size_t i = 0; i < a.singular.size(); ++i) {
        if (a.singular[i].first.poly != b.singular[i].first.poly) return false;
        if (!same_local(a.singular[i].second, b.singular[i].second)) return false;
    }
    return same_local(a.infinity, b.infinity);
}

bool singular_at(const SheafData& F, long k, long x_enc) {
    const Field& Fk = get_field(F.p, F.m * k);
    for (const auto& [s, L] : F.singular) {
        long acc = 0;
        for (long j = (long)s.poly.size() - 1; j >= 0; --j)
            acc = Fk.add(Fk.mul(acc, x_enc), embed_point(F.p, F.m, k, s.poly[j]));
        if (acc == 0) return true;
    }
    return false;
}

void merge_factor(ExplicitSheaf& E, const PointOrbit& t, const MulChar& eta) {
    for (auto it = E.factors.begin(); it != E.factors.end(); ++it) {
        if (it->point.poly != t.poly) continue;
        it->eta = it->eta.times(eta);
        if (it->eta.trivial()) E.factors.erase(it);
        return;
    }
    E.factors.push_back({t, eta});
}

// one trace of convolution level lvl over F_{q^k} costs about q^k table
// entries, squared once nested tables of a previous level are needed
bool trace_affordable(long q, long lvl, long k) {
    double cost = 1;
    for (long i = 0; i < (lvl >= 2 ? 2 * k : k); ++i) cost *= (double)q;
    return cost <= 5e6;
}

bool table_limit_error(const Error& e) {
    std::string c = e.code();
    return c == "SizeLimitExceeded" || c == "DimensionOverflow";
}

} // namespace

PipelineState initial_state(long p, long m, const Conventions& cv, std::vector<long> samples) {
    PipelineState st;
    st.cv = cv;
    st.samples = std::move(samples);
    st.data.p = p;
    st.data.m = m;
    st.data.rank = 1;
    st.data.infinity.blocks = {TameBlock{1, 1, MulChar{p, m, 0}, CycloNum(1), true}};
    validate_sheaf(st.data);
    ExplicitSheaf E;
    E.p = p;
    E.m = m;
    st.concrete = std::move(E);
    fill_from_oracle(st);
    return st;
}

std::optional<ExplicitSheaf> as_kummer_product(const SheafData& F) {
    if (F.rank != 1 || F.infinity.blocks.size() != 1) return std::nullopt;
    const TameBlock& inf = F.infinity.blocks.front();
    if (inf.n != 1 || inf.l != 1 || !inf.alpha_known) return std::nullopt;
    long q = F.base().q;
    ExplicitSheaf E;
    E.p = F.p;
    E.m = F.m;
    E.constant = inf.alpha;
    for (const auto& [s, L] : F.singular) {
        if (L.blocks.size() != 1) return std::nullopt;
        const TameBlock& b = L.blocks.front();
        if (b.n != 1 || b.l != 1 || !b.alpha_known || b.chi.trivial()) return std::nullopt;
        long ratio = (q_to(q, s.degree()) - 1) / (q - 1);
        if (b.chi.e % ratio) return std::nullopt; // not pulled back from the base
        E.factors.push_back({s, MulChar{F.p, F.m, b.chi.e / ratio}});
    }
    if (!same_data(kummer_local_data(E), F)) return std::nullopt;
    return E;
}

SheafData middle_tensor(const SheafData& F, const MulChar& eta, const PointOrbit& t) {
    validate_sheaf(F);
    if (eta.p != F.p || eta.deg != F.m)
        throw err("DegreeMismatch", "tensor character must live on the base field");
    if (eta.trivial()) return F;
    const Field& base = F.base();
    if (t.degree() < 1 || !poly_irreducible_over(base, t.poly))
        throw err("InvalidPoint", "tensor point must be monic irreducible");
    long dt = t.degree();

    // det(F_y (x) L_eta(P_t(y))) = det(F_y) * eta(P_t(y))^rank
    std::map<long, CycloNum> hints;
    for (const auto& [y, v] : F.stalk_det_hint) {
        if (eval_poly_over(base, t.poly, y) == 0) continue;
        hints[y] = v * kummer_scalar_at(eta, base, t, y).pow(F.rank);
    }

    if (auto rec = as_kummer_product(F)) {
        merge_factor(*rec, t, eta);
        SheafData out = kummer_local_data(*rec);
        out.stalk_det_hint = std::move(hints);
        return out;
    }

    SheafData out = F;
    out.stalk_det_hint = std::move(hints);
    long at = -1;
    for (size_t i = 0; i < out.singular.size(); ++i) {
        auto& [s, L] = out.singular[i];
        if (s.poly == t.poly) {
            at = (long)i;
            CycloNum dv = derivative_scalar(base, t, eta);
            for (auto& b : L.blocks) {
                b.chi = b.chi.times(eta.pullback(dt * b.l));
                b.alpha = b.alpha * dv.pow(b.l);
            }
        } else {
            L = twist_unramified(L, point_value_scalar(base, s, t, eta));
        }
    }
    if (at < 0) {
        LocalData Lt;
        Lt.residue_degree = dt;
        for (long i = 0; i < out.rank; ++i)
            Lt.blocks.push_back(TameBlock{1, 1, eta.pullback(dt), CycloNum(1), false});
        out.singular.emplace_back(t, std::move(Lt));
    } else {
        bool smooth = true;
        for (const auto& b : out.singular[at].second.blocks)
            if (!b.chi.trivial() || b.n != 1) smooth = false;
        if (smooth) out.singular.erase(out.singular.begin() + at);
    }
    MulChar inf_mult = eta.pow(dt).inverse();
    for (auto& b : out.infinity.blocks) b.chi = b.chi.times(inf_mult);
    validate_sheaf(out);
    return out;
}

void fill_from_oracle(PipelineState& st) {
    if (!st.concrete) return;
    Oracle O(*st.concrete);
    long lvl = O.levels(), r = st.data.rank;
    for (long y : st.samples) {
        if (!trace_affordable(st.data.base().q, lvl, r)) break;
        if (singular_at(st.data, 1, y)) continue;
        std::vector<CycloNum> pk;
        try {
            for (long k = 1; k <= r; ++k)
                pk.push_back(O.trace(lvl, k, embed_point(st.data.p, st.data.m, k, y)));
        } catch (const Error& e) {
            if (table_limit_error(e)) continue;
            throw;
        }
        st.data.stalk_det_hint[y] = newton_esf(pk).back();
    }
    bool scalar = !st.data.infinity.blocks.empty(), any_unknown = false;
    CycloNum known(1);
    for (const auto& b : st.data.infinity.blocks) {
        // one shared character, or the product would mix unrelated parts
        if (b.n != 1 || b.l != 1 || !(b.chi == st.data.infinity.blocks.front().chi))
            scalar = false;
        if (b.alpha_known)
            known *= b.alpha;
        else
            any_unknown = true;
    }
    if (!scalar || !any_unknown || lvl == 0) return;
    // infinity Frobenius scalars of the convolution are the eigenvalues of
    // the middle H^1 of the previous level; only their product is needed,
    // so recover it from the power sums
    if (!trace_affordable(st.data.base().q, lvl, r)) return;
    std::vector<CycloNum> w;
    try {
        for (long k = 1; k <= r; ++k) {
            const Field& Fk = get_field(st.data.p, st.data.m * k);
            CycloNum acc(0);
            // middle traces at singular points are the inertia invariants,
            // so summing over all of the line gives the middle cohomology
            for (long x = 0; x < Fk.q; ++x) acc += O.trace(lvl - 1, k, x);
            w.push_back(-acc * st.concrete->history[lvl - 1].constant.pow(k));
        }
    } catch (const Error& e) {
        if (table_limit_error(e)) return;
        throw;
    }
    CycloNum prod = newton_esf(w).back() * known.inv();
    bool first = true;
    for (auto& b : st.data.infinity.blocks) {
        if (b.alpha_known) continue;
        b.alpha = first ? prod : CycloNum(1);
        b.alpha_known = true;
        first = false;
    }
}

void apply_step(PipelineState& st, const PipelineStep& step) {
    if (step.kind == PipelineStep::Kind::MiddleTensor) {
        st.data = middle_tensor(st.data, step.chi, step.point);
        if (st.concrete && !step.chi.trivial()) {
            if (!st.concrete->history.empty()) {
                // a tensor after a convolution leaves the Kummer-product class
                st.concrete.reset();
            } else {
                merge_factor(*st.concrete, step.point, step.chi);
                if (!same_data(st.data, kummer_local_data(*st.concrete)))
                    throw err("CrossCheckFailed", "tensor step disagrees with the oracle track");
            }
        }
    } else {
        if (st.concrete) fill_from_oracle(st); // complete the input data first
        SheafData prev = st.data;
        SheafData next = mc_sheaf(prev, step.chi, st.cv);
        if (st.concrete) {
            st.concrete->history.push_back({step.chi, CycloNum(1)});
            Oracle O(*st.concrete);
            long lvl = O.levels();
            bool rank_checked = false;
            for (long y : st.samples) {
                if (singular_at(prev, 1, y)) continue;
                if (!rank_checked && trace_affordable(prev.base().q, lvl, 2 * next.rank)) {
                    try {
                        if (O.recover_rank(lvl, y, next.rank) != next.rank)
                            throw err("CrossCheckFailed", "recovered rank disagrees with mc_rank");
                        rank_checked = true;
                    } catch (const Error& e) {
                        if (!table_limit_error(e)) throw;
                    }
                }
                if (!standard_situation(prev, step.chi)) continue;
                if (!trace_affordable(prev.base().q, lvl, next.rank)) continue;
                try {
                    CycloNum lhs = det_mc(prev, step.chi, y, st.cv);
                    std::vector<CycloNum> pk;
                    for (long k = 1; k <= next.rank; ++k)
                        pk.push_back(O.trace(lvl, k, embed_point(prev.p, prev.m, k, y)));
                    if (lhs != newton_esf(pk).back())
                        throw err("CrossCheckFailed",
                                  "middle determinant disagrees with the oracle");
                } catch (const Error& e) {
                    std::string c = e.code();
                    if (c != "UnknownInvariantScalar" && c != "MissingStalkDet" &&
                        !table_limit_error(e))
                        throw;
                }
            }
        }
        st.data = std::move(next);
    }
    if (st.concrete) fill_from_oracle(st);
}

AssociativityReport associativity_probe(const PipelineState& st, const MulChar& chi1,
                                        const MulChar& chi2, long d_bound) {
    if (!st.concrete)
        throw err("MissingOracleTrack", "associativity probe needs the concrete track");
    if (chi1.trivial() || chi2.trivial())
        throw err("TrivialCharacter", "probe characters must be nontrivial");
    AssociativityReport rep;
    ExplicitSheaf E2 = *st.concrete;
    E2.history.push_back({chi1, CycloNum(1)});
    E2.history.push_back({chi2, CycloNum(1)});
    MulChar chi12 = chi1.times(chi2);
    ExplicitSheaf E1 = *st.concrete;
    bool tate = chi12.trivial();
    if (!tate) E1.history.push_back({chi12, CycloNum(1)});
    Oracle O2(std::move(E2)), O1(std::move(E1));
    long q = st.data.base().q;
    bool have = false, ok = true;
    for (long y : st.samples) {
        if (singular_at(st.data, 1, y)) continue;
        rep.samples.push_back(y);
        for (long k = 1; k <= 2; ++k) {
            long yk = embed_point(st.data.p, st.data.m, k, y);
            CycloNum t2 = O2.trace(O2.levels(), k, yk);
            CycloNum t1 = O1.trace(O1.levels(), k, yk);
            if (tate) t1 = q_power(q, k) * t1; // the single route is the Tate twist
            if (t1.is_zero()) {
                if (!t2.is_zero()) ok = false;
                continue;
            }
            if (!have) {
                if (k == 1) {
                    rep.ratio = t2 * t1.inv();
                    have = true;
                }
                continue;
            }
            if (t2 != rep.ratio.pow(k) * t1) ok = false;
        }
    }
    rep.ratio_constant = have && ok;
    if (!rep.samples.empty()) {
        long y0 = rep.samples.front();
        try {
            rep.rank_match = O2.recover_rank(O2.levels(), y0, d_bound) ==
                             O1.recover_rank(O1.levels(), y0, d_bound);
        } catch (const Error&) {
            rep.rank_match = false;
        }
    }
    return rep;
}

} // namespace mcx
