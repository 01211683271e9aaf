#include "mcx/checks.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "mcx/charsum.hpp"

namespace mcx {

namespace {

const Conventions kPinned{};

struct TaskResult {
    bool pass = true;
    long cases = 0;
};

using Task = std::function<TaskResult()>;

// Work items are independent and indexed; results land in their own slots,
// so the combined verdict is bit-identical for any thread count.
TaskResult run_tasks(const std::vector<Task>& tasks, int threads) {
    std::vector<TaskResult> res(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            try {
                res[i] = tasks[i]();
            } catch (const std::exception&) {
                res[i] = {false, 1};
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    TaskResult out;
    for (const auto& r : res) {
        out.pass = out.pass && r.pass;
        out.cases += r.cases;
    }
    return out;
}

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

long embed_enc(long p, long m, long from_k, long to_k, long x) {
    return from_k == to_k ? x : get_embedding(p, m * from_k, m * to_k).embed(x);
}

// ---- AC-1 ------------------------------------------------------------

TaskResult gauss_jacobi_for_char(long p, long m, long e) {
    TaskResult r;
    const Field& F = get_field(p, m);
    long Q = F.q;
    MulChar chi{p, m, e};
    CycloNum s(0);
    for (long j = 0; j < Q - 1; ++j) s += char_eval(chi, F.wrap(F.exp(j)));
    r.pass = r.pass && s == (e == 0 ? CycloNum(Q - 1) : CycloNum(0));
    r.cases += 1;
    if (e == 0) return r;
    CycloNum g = gauss_sum(chi);
    r.pass = r.pass && g * gauss_sum(chi.inverse()) == chi.at_minus_one() * CycloNum(Q);
    r.cases += 1;
    for (long e2 = 1; e2 < Q - 1; ++e2) {
        if ((e + e2) % (Q - 1) == 0) continue;
        MulChar chi2{p, m, e2};
        MulChar prod = chi.times(chi2);
        // multiplicative form of J = -g g' / g(chi chi'); inversion in large
        // cyclotomic fields is far more expensive than one extra product
        r.pass = r.pass && jacobi_sum(chi, chi2) * gauss_sum(prod) == -g * gauss_sum(chi2);
        r.cases += 1;
    }
    return r;
}

// ---- AC-2 ------------------------------------------------------------

TaskResult epsilon_laws_for_block(long p, long m, long d, const TameBlock& b) {
    TaskResult r;
    long q = q_to(p, m), q_s = q_to(q, d);
    // closed form vs the expansion from the bottom graded line
    TameBlock bottom{1, b.l, b.chi, bottom_scalar(b, q_s, kPinned), true};
    r.pass = r.pass && epsilon0_block(b, q_s, kPinned) ==
                           q_power(q_s, b.n * (b.n - 1) / 2) *
                               epsilon0_block(bottom, q_s, kPinned).pow(b.n);
    r.cases += 1;
    LocalData L;
    L.residue_degree = d;
    L.blocks.push_back(b);
    CycloNum one(1), eps = epsilon0_point(L, q, one, kPinned);
    // unramified twist law beta^rank
    r.pass = r.pass &&
             epsilon0_point(L, q, CycloNum(2), kPinned) == CycloNum(2).pow(b.dim()) * eps;
    // Tate twist law q_s^{-rank}
    r.pass = r.pass &&
             epsilon0_point(tate_twist(L, q, 1), q, one, kPinned) == q_power(q_s, -b.dim()) * eps;
    // direct-sum multiplicativity against a fixed partner block
    LocalData L2 = L;
    L2.blocks.push_back(TameBlock{1, 1, MulChar{p, m * d, 0}, CycloNum(3), true});
    r.pass = r.pass && epsilon0_point(L2, q, one, kPinned) ==
                           eps * epsilon0_block(L2.blocks[1], q_s, kPinned);
    r.cases += 3;
    return r;
}

std::vector<Task> epsilon_law_tasks() {
    std::vector<Task> tasks;
    for (auto [p, m] : {std::pair<long, long>{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
        long q = q_to(p, m);
        for (long d : {1L, 2L}) {
            for (long l : {1L, 2L}) {
                if (q_to(q, d * l) > 81) continue;
                long Q = q_to(q, d * l);
                std::vector<long> exps;
                if (l == 1) {
                    exps = {0, 1, (Q - 1) / 2};
                } else {
                    exps = {1, (Q - 1) / 2 - 1};
                }
                for (long e : exps) {
                    for (long n : {1L, 2L, 3L}) {
                        for (long a : {1L, 2L, -1L}) {
                            if (e == 0 && l != 1) continue;
                            TameBlock b{n, l, MulChar{p, m * d * l, e}, CycloNum(a), true};
                            tasks.push_back([p = p, m = m, d, b] {
                                return epsilon_laws_for_block(p, m, d, b);
                            });
                        }
                    }
                }
            }
        }
    }
    return tasks;
}

// ---- AC-3 / AC-4 instance grid ---------------------------------------

struct DetInstance {
    ExplicitSheaf E;
    long chi_e = 0;
    std::vector<long> ys;
};

DetInstance inst(long p, long m, std::vector<std::pair<std::vector<long>, long>> factors,
                 long chi_e, std::vector<long> ys) {
    DetInstance I;
    I.E.p = p;
    I.E.m = m;
    for (auto& [poly, e] : factors) I.E.factors.push_back({PointOrbit{poly}, MulChar{p, m, e}});
    I.chi_e = chi_e;
    I.ys = std::move(ys);
    return I;
}

// rational factor x - a, a given as an element encoding
std::vector<long> lin(long p, long m, long a) { return {get_field(p, m).neg(a), 1}; }

std::vector<DetInstance> det_instances() {
    std::vector<DetInstance> v;
    auto L5 = [](long a) { return lin(5, 1, a); };
    auto L7 = [](long a) { return lin(7, 1, a); };
    auto L3 = [](long a) { return lin(3, 1, a); };
    auto L9 = [](long a) { return lin(3, 2, a); };
    // q = 5, quadratic chi
    v.push_back(inst(5, 1, {{L5(0), 2}, {L5(1), 2}, {L5(2), 2}}, 2, {3, 4}));
    v.push_back(inst(5, 1, {{L5(0), 2}, {L5(1), 2}, {L5(3), 2}}, 2, {2, 4}));
    v.push_back(inst(5, 1, {{L5(0), 2}, {L5(2), 2}, {L5(4), 2}}, 2, {1, 3}));
    v.push_back(inst(5, 1, {{L5(1), 2}, {L5(2), 2}, {L5(3), 2}}, 2, {0, 4}));
    v.push_back(inst(5, 1, {{L5(0), 2}, {L5(3), 2}, {L5(4), 2}}, 2, {1, 2}));
    // q = 5, order-4 factors convolved with the quadratic character
    v.push_back(inst(5, 1, {{L5(0), 1}, {L5(1), 1}}, 2, {2, 3, 4}));
    v.push_back(inst(5, 1, {{L5(0), 1}, {L5(2), 1}}, 2, {1, 3, 4}));
    v.push_back(inst(5, 1, {{L5(1), 1}, {L5(4), 1}}, 2, {0, 2, 3}));
    v.push_back(inst(5, 1, {{L5(0), 2}, {{2, 0, 1}, 2}}, 2, {1, 3, 4}));
    // q = 5, order-4 chi
    v.push_back(inst(5, 1, {{L5(0), 1}, {L5(1), 1}, {L5(2), 1}}, 1, {3, 4}));
    v.push_back(inst(5, 1, {{L5(0), 1}, {L5(1), 3}, {L5(2), 3}}, 1, {3, 4}));
    v.push_back(inst(5, 1, {{L5(0), 1}, {L5(2), 1}, {L5(3), 1}}, 1, {1, 4}));
    v.push_back(inst(5, 1, {{L5(0), 1}, {{2, 0, 1}, 1}}, 1, {1, 2, 3}));
    // q = 3, quadratic chi through a degree-2 point
    v.push_back(inst(3, 1, {{L3(0), 1}, {{1, 0, 1}, 1}}, 1, {1, 2}));
    v.push_back(inst(3, 1, {{L3(1), 1}, {{2, 1, 1}, 1}}, 1, {0, 2}));
    v.push_back(inst(3, 1, {{L3(2), 1}, {{1, 0, 1}, 1}}, 1, {0, 1}));
    // q = 7, quadratic chi
    v.push_back(inst(7, 1, {{L7(0), 3}, {L7(1), 3}, {L7(2), 3}}, 3, {3, 4, 5}));
    v.push_back(inst(7, 1, {{L7(0), 3}, {L7(2), 3}, {L7(4), 3}}, 3, {1, 3, 5}));
    v.push_back(inst(7, 1, {{L7(1), 3}, {L7(3), 3}, {L7(5), 3}}, 3, {0, 2, 4}));
    v.push_back(inst(7, 1, {{L7(0), 3}, {L7(1), 3}, {L7(3), 3}}, 3, {2, 4, 5}));
    v.push_back(inst(7, 1, {{L7(0), 3}, {{1, 0, 1}, 3}}, 3, {1, 2, 3}));
    // q = 7, order-3 and order-6 chi
    v.push_back(inst(7, 1, {{L7(0), 2}, {L7(1), 2}}, 2, {2, 3, 4}));
    v.push_back(inst(7, 1, {{L7(0), 2}, {L7(3), 2}}, 2, {1, 2, 4}));
    v.push_back(inst(7, 1, {{L7(0), 1}, {L7(1), 1}, {L7(2), 3}}, 1, {3, 4, 5}));
    // q = 9, quadratic chi
    v.push_back(inst(3, 2, {{L9(0), 4}, {L9(1), 4}, {L9(2), 4}}, 4, {3, 4, 5}));
    v.push_back(inst(3, 2, {{L9(0), 4}, {L9(3), 4}, {L9(6), 4}}, 4, {1, 2, 4}));
    v.push_back(inst(3, 2, {{L9(1), 4}, {L9(4), 4}, {L9(7), 4}}, 4, {0, 2, 3}));
    v.push_back(
        inst(3, 2, {{L9(0), 4}, {{get_field(3, 2).exp(1), 0, 1}, 4}}, 4, {1, 2, 3}));
    // q = 9, order-4 and order-8 chi
    v.push_back(inst(3, 2, {{L9(0), 2}, {L9(1), 2}, {L9(2), 2}}, 2, {3, 4, 5}));
    v.push_back(inst(3, 2, {{L9(3), 2}, {L9(4), 2}, {L9(5), 2}}, 2, {0, 1, 2}));
    v.push_back(inst(3, 2, {{L9(0), 1}, {L9(1), 1}, {L9(2), 5}}, 1, {3, 4, 5}));
    return v;
}

TaskResult det_oracle_for_instance(const DetInstance& I) {
    TaskResult r;
    MulChar chi{I.E.p, I.E.m, I.chi_e};
    SheafData F = kummer_local_data(I.E);
    if (!standard_situation(F, chi)) return {false, 1};
    Oracle O0(I.E);
    ExplicitSheaf E1 = I.E;
    E1.history.push_back({chi, CycloNum(1)});
    Oracle O1(E1);
    long sumdeg = 0;
    for (auto& [s, L] : F.singular) sumdeg += s.degree();
    long d = F.rank * sumdeg, rk = mc_rank(F, chi);
    for (long y : I.ys) F.stalk_det_hint[y] = O0.trace(0, 1, y);
    for (long y : I.ys) {
        r.pass = r.pass && det_h1c(F, chi, y, kPinned) == O1.charpoly(y, d).back();
        std::vector<CycloNum> pmid;
        for (long k = 1; k <= rk; ++k)
            pmid.push_back(O1.trace(1, k, embed_enc(I.E.p, I.E.m, 1, k, y)));
        r.pass = r.pass && det_mc(F, chi, y, kPinned) == newton_esf(pmid).back();
        r.cases += 2;
    }
    return r;
}

TaskResult rank_local_for_instance(const DetInstance& I) {
    TaskResult r;
    long p = I.E.p, m = I.E.m, q = q_to(p, m);
    MulChar chi{p, m, I.chi_e};
    SheafData F = kummer_local_data(I.E);
    Oracle O0(I.E);
    ExplicitSheaf E1 = I.E;
    E1.history.push_back({chi, CycloNum(1)});
    Oracle O1(E1);
    long sumdeg = 0;
    for (auto& [s, L] : F.singular) sumdeg += s.degree();
    long d = F.rank * sumdeg, rk = mc_rank(F, chi);
    long y0 = I.ys.front();
    // H^1_c dimension from the Euler characteristic vs trace consistency
    if (std::pow((double)q, 2.0 * d) <= 1e7) {
        r.pass = r.pass && O1.recover_dimension(y0, d) == d;
        r.cases += 1;
    }
    // middle rank
    if (std::pow((double)q, 2.0 * rk) <= 1e7) {
        r.pass = r.pass && O1.recover_rank(1, y0, rk) == rk;
        r.cases += 1;
    }
    // invariant stalk traces of the output at singular points: nontrivial
    // characters contribute nothing, each unipotent block its bottom graded
    // eigenline; skipped where unramified filler scalars are unknown
    SheafData G = mc_sheaf(F, chi, kPinned);
    for (const auto& [s, L] : G.singular) {
        bool known = true;
        for (const auto& b : L.blocks) known = known && b.alpha_known;
        if (!known || s.degree() > 2) continue;
        long dg = s.degree(), q_s = q_to(q, dg);
        auto roots = poly_roots_in(F.base(), s.poly, dg);
        if (roots.empty()) continue;
        for (long k = dg; k <= 4; k += dg) {
            CycloNum pred(0);
            for (const auto& b : L.blocks)
                if (b.chi.trivial()) pred += bottom_scalar(b, q_s, kPinned).pow(k / dg);
            r.pass = r.pass &&
                     O1.trace(1, k, embed_enc(p, m, dg, k, roots.front())) == pred;
            r.cases += 1;
        }
    }
    return r;
}

// ---- AC-5 ------------------------------------------------------------

// J_2 instances: the second convolution of an odd quadratic Kummer product,
// plus the determinant of a third convolution, which is the observable that
// separates the quotient twist from the eigenspace choice.
// The oracle side is convention-free and shared by all four combinations.
struct SquareTruth {
    ExplicitSheaf E;
    MulChar chi;
    std::vector<long> ys;
    std::vector<CycloNum> w;                        // infinity power sums
    std::map<long, std::vector<CycloNum>> mid;      // y -> level-1 power sums
    std::map<long, CycloNum> second;                // y -> level-2 trace
    std::map<long, std::vector<CycloNum>> stalks;   // point root -> level-1 traces
    CycloNum w2;                                    // level-2 infinity scalar
    std::map<long, std::vector<CycloNum>> third;    // y -> level-3 power sums
};

SquareTruth square_truth(long p, std::vector<long> pts, std::vector<long> ys) {
    SquareTruth T;
    T.E.p = p;
    T.E.m = 1;
    MulChar quad{p, 1, (p - 1) / 2};
    const Field& F = get_field(p, 1);
    for (long a : pts) T.E.factors.push_back({PointOrbit{{F.neg(a), 1}}, quad});
    T.chi = quad;
    T.ys = ys;
    Oracle O0(T.E);
    ExplicitSheaf E1 = T.E;
    E1.history.push_back({quad, CycloNum(1)});
    Oracle O1(E1);
    ExplicitSheaf E2 = E1;
    E2.history.push_back({quad, CycloNum(1)});
    Oracle O2(E2);
    for (long k = 1; k <= 2; ++k) {
        const Field& Fk = get_field(p, k);
        CycloNum acc(0);
        for (long x = 0; x < Fk.q; ++x) acc += O0.trace(0, k, x);
        T.w.push_back(-acc);
    }
    for (long y : ys) {
        std::vector<CycloNum> pmid;
        for (long k = 1; k <= 2; ++k) pmid.push_back(O1.trace(1, k, embed_enc(p, 1, 1, k, y)));
        T.mid[y] = std::move(pmid);
        T.second[y] = O2.trace(2, 1, y);
    }
    for (long a : pts) {
        std::vector<CycloNum> tr;
        for (long k = 1; k <= 2; ++k) tr.push_back(O1.trace(1, k, embed_enc(p, 1, 1, k, a)));
        T.stalks[a] = std::move(tr);
    }
    // middle H^1 of level 1 gives the infinity scalar of the second output
    CycloNum acc2(0);
    for (long x = 0; x < F.q; ++x) acc2 += O2.trace(1, 1, x);
    T.w2 = -acc2;
    ExplicitSheaf E3 = E2;
    E3.history.push_back({quad, CycloNum(1)});
    Oracle O3(E3);
    for (long y : ys) {
        std::vector<CycloNum> p3;
        for (long k = 1; k <= 2; ++k) p3.push_back(O3.trace(3, k, embed_enc(p, 1, 1, k, y)));
        T.third[y] = std::move(p3);
    }
    return T;
}

bool square_passes(const SquareTruth& T, const Conventions& cv) {
    long q = q_to(T.E.p, T.E.m);
    SheafData F = kummer_local_data(T.E);
    SheafData F1 = mc_sheaf(F, T.chi, cv);
    if (F1.rank != 2) return false;
    // only the product of the infinity scalars matters
    F1.infinity.blocks[0].alpha = newton_esf(T.w).back();
    F1.infinity.blocks[0].alpha_known = true;
    F1.infinity.blocks[1].alpha = CycloNum(1);
    F1.infinity.blocks[1].alpha_known = true;
    for (long y : T.ys) F1.stalk_det_hint[y] = newton_esf(T.mid.at(y)).back();
    for (long y : T.ys)
        if (det_mc(F1, T.chi, y, cv) != T.second.at(y)) return false;
    // invariant stalk traces of the J_2 blocks
    for (const auto& [s, L] : F1.singular) {
        long a = F.base().neg(s.poly[0]);
        for (long k = 1; k <= 2; ++k) {
            CycloNum pred(0);
            for (const auto& b : L.blocks)
                if (b.chi.trivial()) pred += bottom_scalar(b, q, cv).pow(k);
            if (T.stalks.at(a)[k - 1] != pred) return false;
        }
    }
    // third convolution: its determinant sees the quotient of the J_2
    // blocks by their invariant lines, so it fixes the quotient twist
    SheafData F2 = mc_sheaf(F1, T.chi, cv);
    if (F2.rank != 1) return false;
    F2.infinity.blocks[0].alpha = T.w2;
    F2.infinity.blocks[0].alpha_known = true;
    for (long y : T.ys) F2.stalk_det_hint[y] = T.second.at(y);
    for (long y : T.ys)
        if (det_mc(F2, T.chi, y, cv) != newton_esf(T.third.at(y)).back()) return false;
    return true;
}

// ---- AC-6 ------------------------------------------------------------

TaskResult quad_preservation_instance(long p, std::vector<std::vector<long>> polys,
                                      std::vector<long> ys) {
    TaskResult r;
    ExplicitSheaf E;
    E.p = p;
    E.m = 1;
    MulChar quad{p, 1, (p - 1) / 2};
    for (auto& poly : polys) E.factors.push_back({PointOrbit{poly}, quad});
    SheafData F = kummer_local_data(E);
    Oracle O0(E);
    for (long y : ys) F.stalk_det_hint[y] = O0.trace(0, 1, y);
    auto rep = quadratic_det_check(F, ys, kPinned);
    r.pass = rep.output_dets.size() == ys.size();
    r.cases = 1 + (long)rep.input_dets.size() + (long)rep.output_dets.size();
    return r;
}

// ---- AC-7 ------------------------------------------------------------

TaskResult involution_instance(long p, std::vector<std::vector<long>> polys,
                               std::vector<long> chars, long chi_e) {
    TaskResult r;
    ExplicitSheaf E;
    E.p = p;
    E.m = 1;
    for (size_t i = 0; i < polys.size(); ++i)
        E.factors.push_back({PointOrbit{polys[i]}, MulChar{p, 1, chars[i]}});
    MulChar chi{p, 1, chi_e};
    ExplicitSheaf E2 = E;
    E2.history.push_back({chi, CycloNum(1)});
    E2.history.push_back({chi.inverse(), CycloNum(1)});
    Oracle O0(E), O2(E2);
    const Field& F = get_field(p, 1);
    // compare eigenvalues at >= 3 points, over the base and its quadratic
    // extension when the base is too small
    long points = 0;
    for (long k = 1; k <= 2 && points < 3; ++k) {
        const Field& Fk = get_field(p, k);
        for (long x = 0; x < Fk.q && points < 3; ++x) {
            bool sing = false;
            for (const auto& f : E.factors) {
                long v = 0;
                for (long j = (long)f.point.poly.size() - 1; j >= 0; --j)
                    v = Fk.add(Fk.mul(v, x), embed_enc(p, 1, 1, k, f.point.poly[j]));
                sing = sing || v == 0;
            }
            if (sing) continue;
            // eigenvalue scaling by the constant chi(-1) times q per
            // Frobenius power
            for (long kk = k; kk <= 2; kk += k) {
                long xk = embed_enc(p, 1, k, kk, x);
                CycloNum expect =
                    chi.at_minus_one().pow(kk) * q_power(F.q, kk) * O0.trace(0, kk, xk);
                r.pass = r.pass && O2.trace(2, kk, xk) == expect;
                r.cases += 1;
            }
            points += 1;
        }
    }
    r.pass = r.pass && points >= 3;
    return r;
}

} // namespace

CheckLine check_gauss_jacobi(int threads) {
    std::vector<Task> tasks;
    for (auto [p, m] : {std::pair<long, long>{3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1},
                        {13, 1}, {5, 2}, {3, 3}, {7, 2}}) {
        long Q = q_to(p, m);
        for (long e = 0; e < Q - 1; ++e)
            tasks.push_back([p = p, m = m, e] { return gauss_jacobi_for_char(p, m, e); });
    }
    auto r = run_tasks(tasks, threads);
    return {"gauss-jacobi identities", r.pass, r.cases, ""};
}

CheckLine check_epsilon_laws(int threads) {
    auto tasks = epsilon_law_tasks();
    auto r = run_tasks(tasks, threads);
    bool enough = (long)tasks.size() >= 200;
    return {"epsilon factor laws", r.pass && enough, r.cases, ""};
}

CheckLine check_determinant_oracle(int threads) {
    std::vector<Task> tasks;
    for (const auto& I : det_instances())
        tasks.push_back([I] { return det_oracle_for_instance(I); });
    auto r = run_tasks(tasks, threads);
    bool enough = (long)tasks.size() >= 30;
    return {"determinant oracle equivalence", r.pass && enough, r.cases, ""};
}

CheckLine check_rank_local_data(int threads) {
    std::vector<Task> tasks;
    for (const auto& I : det_instances())
        tasks.push_back([I] { return rank_local_for_instance(I); });
    auto r = run_tasks(tasks, threads);
    return {"rank and local data", r.pass, r.cases, ""};
}

CheckLine check_convention_pinning(int threads) {
    std::vector<SquareTruth> truths;
    truths.push_back(square_truth(5, {0, 1, 2}, {3, 4}));
    truths.push_back(square_truth(7, {0, 1, 2}, {3, 4, 5}));
    std::vector<Conventions> combos;
    for (bool top : {false, true})
        for (int t : {0, 1}) combos.push_back(Conventions{top, t});
    std::vector<Task> tasks;
    for (const auto& cv : combos)
        tasks.push_back([&truths, cv]() -> TaskResult {
            for (const auto& T : truths)
                if (!square_passes(T, cv)) return {false, 1};
            return {true, 1};
        });
    std::vector<TaskResult> res(tasks.size());
    // small fixed task set; reuse the harness for determinism
    std::vector<Task> wrapped;
    for (size_t i = 0; i < tasks.size(); ++i)
        wrapped.push_back([&tasks, &res, i]() -> TaskResult {
            res[i] = tasks[i]();
            return res[i];
        });
    run_tasks(wrapped, threads);
    int passing = 0;
    size_t which = 0;
    for (size_t i = 0; i < res.size(); ++i)
        if (res[i].pass) {
            passing += 1;
            which = i;
        }
    std::ostringstream os;
    if (passing == 1)
        os << "pinned eigenspace_weight=" << (combos[which].eigenspace_top ? "top" : "0")
           << " quotient_twist=" << combos[which].quotient_twist;
    bool default_combo = passing == 1 && !combos[which].eigenspace_top &&
                         combos[which].quotient_twist == 1;
    return {"convention pinning", passing == 1 && default_combo,
            (long)(truths.size() * combos.size()), os.str()};
}

CheckLine check_quadratic_preservation(int threads) {
    std::vector<Task> tasks;
    auto add = [&](long p, std::vector<long> pts, std::vector<std::vector<long>> extra,
                   std::vector<long> ys) {
        const Field& F = get_field(p, 1);
        std::vector<std::vector<long>> polys = std::move(extra);
        for (long a : pts) polys.push_back({F.neg(a), 1});
        tasks.push_back(
            [p, polys, ys] { return quad_preservation_instance(p, polys, ys); });
    };
    // q = 3 leaves no rational samples when all three points ramify, so the
    // F_3 instances pair one rational point with a quadratic one
    add(3, {2}, {{2, 2, 1}}, {0, 1});
    add(3, {0}, {{1, 0, 1}}, {1, 2});
    add(3, {1}, {{2, 1, 1}}, {0, 2});
    add(5, {0, 1, 2}, {}, {3, 4});
    add(5, {0, 1, 3}, {}, {2, 4});
    add(5, {0, 2, 4}, {}, {1, 3});
    add(5, {1, 2, 4}, {}, {0, 3});
    add(5, {0}, {{2, 0, 1}}, {1, 2, 3});
    add(7, {0, 1, 2}, {}, {3, 4, 5});
    add(7, {0, 2, 4}, {}, {1, 3, 5});
    add(7, {1, 3, 5}, {}, {0, 2, 4});
    add(7, {0}, {{1, 0, 1}}, {1, 2, 3});
    auto r = run_tasks(tasks, threads);
    bool enough = (long)tasks.size() >= 10;
    return {"quadratic determinant preservation", r.pass && enough, r.cases, ""};
}

CheckLine check_involution(int threads) {
    std::vector<Task> tasks;
    auto add = [&](long p, std::vector<long> pts, std::vector<std::vector<long>> extra,
                   std::vector<long> chars, long chi_e) {
        const Field& F = get_field(p, 1);
        std::vector<std::vector<long>> polys = std::move(extra);
        for (long a : pts) polys.push_back({F.neg(a), 1});
        tasks.push_back(
            [p, polys, chars, chi_e] { return involution_instance(p, polys, chars, chi_e); });
    };
    add(3, {0}, {{1, 0, 1}}, {1, 1}, 1);
    add(5, {0, 1, 2}, {}, {2, 2, 2}, 2);
    add(5, {0, 1, 2}, {}, {1, 1, 1}, 1);
    add(7, {0, 1, 2}, {}, {3, 3, 3}, 3);
    add(7, {0, 2, 3}, {}, {3, 3, 3}, 3);
    add(7, {0, 1, 2}, {}, {1, 1, 3}, 1);
    auto r = run_tasks(tasks, threads);
    bool enough = (long)tasks.size() >= 5;
    return {"involution Tate twist", r.pass && enough, r.cases, ""};
}

bool CheckReport::all_pass() const {
    for (const auto& l : lines)
        if (!l.pass) return false;
    return true;
}

std::string CheckReport::text() const {
    std::ostringstream os;
    for (const auto& l : lines) {
        os << l.name << ": " << (l.pass ? "pass" : "FAIL") << " (" << l.cases << " checks)";
        if (!l.detail.empty()) os << " [" << l.detail << "]";
        os << "\n";
    }
    return os.str();
}

CheckReport run_check_suite(int threads) {
    CheckReport rep;
    rep.lines.push_back(check_gauss_jacobi(threads));
    rep.lines.push_back(check_epsilon_laws(threads));
    rep.lines.push_back(check_determinant_oracle(threads));
    rep.lines.push_back(check_rank_local_data(threads));
    rep.lines.push_back(check_convention_pinning(threads));
    rep.lines.push_back(check_quadratic_preservation(threads));
    rep.lines.push_back(check_involution(threads));
    return rep;
}

} // namespace mcx
