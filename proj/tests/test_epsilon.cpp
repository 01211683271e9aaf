#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcx/epsilon.hpp"
#include "mcx/oracle.hpp"

using namespace mcx;

namespace {

const Conventions cv{};

CycloNum qpow(long q, long e) {
    Int num = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) num *= q;
    return CycloNum(e < 0 ? Rat(1, num) : Rat(num));
}

// e_d of the eigenvalue multiset from its power sums p_1..p_d
CycloNum newton_det(const std::vector<CycloNum>& p) {
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
    return e.back();
}

ExplicitSheaf make_sheaf(long p, std::vector<std::pair<std::vector<long>, long>> pts) {
    ExplicitSheaf E;
    E.p = p;
    E.m = 1;
    for (auto& [poly, e] : pts) E.factors.push_back({PointOrbit{poly}, MulChar{p, 1, e}});
    return E;
}

// oracle cross-check of det_h1c and det_mc for one configuration
void check_dets(ExplicitSheaf E, long chi_e, std::vector<long> ys,
                const CycloNum* frozen_h1c = nullptr, const CycloNum* frozen_mc = nullptr) {
    MulChar chi{E.p, E.m, chi_e};
    SheafData F = kummer_local_data(E);
    REQUIRE(standard_situation(F, chi));
    Oracle O0(E);
    ExplicitSheaf E1 = E;
    E1.history.push_back({chi, CycloNum(1)});
    Oracle O1(E1);
    long sumdeg = 0;
    for (auto& [s, L] : F.singular) sumdeg += s.degree();
    long d = F.rank * sumdeg, rk = mc_rank(F, chi);
    for (long y : ys) F.stalk_det_hint[y] = O0.trace(0, 1, y);
    for (long y : ys) {
        CycloNum truth = O1.charpoly(y, d).back();
        CHECK(det_h1c(F, chi, y, cv) == truth);
        if (frozen_h1c) CHECK(truth == *frozen_h1c);
        std::vector<CycloNum> pmid;
        for (long k = 1; k <= rk; ++k) {
            long yk = k == 1 ? y : get_embedding(E.p, E.m, E.m * k).embed(y);
            pmid.push_back(O1.trace(1, k, yk));
        }
        CycloNum mid = newton_det(pmid);
        CHECK(det_mc(F, chi, y, cv) == mid);
        if (frozen_mc) CHECK(mid == *frozen_mc);
    }
}

} // namespace

TEST_CASE("block epsilon factors match the closed forms") {
    CHECK(epsilon0_block({1, 1, MulChar{5, 1, 0}, CycloNum(7)}, 5, cv) == CycloNum(-7));
    // quadratic over F_3: chi(-1) = -1 cancels the leading sign
    MulChar q3{3, 1, 1};
    CHECK(epsilon0_block({1, 1, q3, CycloNum(1)}, 3, cv) == gauss_sum(q3));
    CHECK(epsilon0_block({2, 1, MulChar{3, 1, 0}, CycloNum(1)}, 3, cv) == CycloNum(3));
    // order 4 over F_5: chi(-1) = -1 again
    MulChar r5{5, 1, 1};
    CHECK(epsilon0_block({1, 1, r5, CycloNum(1)}, 5, cv) == gauss_sum(r5));
    CHECK_THROWS_AS(epsilon0_block({1, 1, r5, CycloNum(1), false}, 5, cv), Error);
}

TEST_CASE("point epsilon factors: multiplicativity and twist laws") {
    LocalData L;
    L.residue_degree = 1;
    L.blocks.push_back({1, 1, MulChar{5, 1, 2}, CycloNum(2)});
    L.blocks.push_back({2, 1, MulChar{5, 1, 0}, CycloNum(3)});
    CycloNum one(1);
    CHECK(epsilon0_point(L, 5, one, cv) ==
          epsilon0_block(L.blocks[0], 5, cv) * epsilon0_block(L.blocks[1], 5, cv));
    CHECK(epsilon0_point(LocalData{}, 5, one, cv) == one);
    // Tate twist scales by q_s^{-m * rank}, unramified twist by beta^rank
    CHECK(epsilon0_point(tate_twist(L, 5, 1), 5, one, cv) ==
          qpow(5, -3) * epsilon0_point(L, 5, one, cv));
    CHECK(epsilon0_point(L, 5, CycloNum(2), cv) ==
          CycloNum(8) * epsilon0_point(L, 5, one, cv));
    LocalData L2;
    L2.residue_degree = 2;
    L2.blocks.push_back({1, 1, MulChar{5, 2, 12}, CycloNum(1)});
    CHECK(epsilon0_point(tate_twist(L2, 5, 1), 5, one, cv) ==
          qpow(25, -1) * epsilon0_point(L2, 5, one, cv));
}

TEST_CASE("H^1_c and middle determinants match the oracle") {
    CycloNum five(5), seven(7);
    CycloNum m7(-7);
    check_dets(make_sheaf(5, {{{0, 1}, 2}, {{4, 1}, 2}, {{3, 1}, 2}}), 2, {3, 4}, &five, &five);
    check_dets(make_sheaf(7, {{{0, 1}, 3}, {{6, 1}, 3}, {{5, 1}, 3}}), 3, {3, 4, 5}, &m7, &seven);
    // order-4 characters: eigenvalue products leave the rationals
    CycloNum i4 = CycloNum::root_of_unity(4, 1);
    CycloNum h4 = CycloNum(-3) + CycloNum(4) * i4;
    CycloNum m4 = CycloNum(3) - CycloNum(4) * i4;
    check_dets(make_sheaf(5, {{{0, 1}, 1}, {{4, 1}, 1}, {{3, 1}, 1}}), 1, {3, 4}, &h4, &m4);
    check_dets(make_sheaf(5, {{{0, 1}, 1}, {{4, 1}, 3}, {{3, 1}, 3}}), 1, {3, 4});
    check_dets(make_sheaf(5, {{{0, 1}, 1}, {{4, 1}, 1}}), 2, {2, 3});
    // a degree-2 closed point
    check_dets(make_sheaf(5, {{{0, 1}, 2}, {{2, 0, 1}, 2}}), 2, {1, 3}, &five, &five);
    check_dets(make_sheaf(13, {{{0, 1}, 3}, {{12, 1}, 3}, {{11, 1}, 3}}), 3, {3});
    // a geometrically constant twist scales both routes identically
    ExplicitSheaf Ec = make_sheaf(5, {{{0, 1}, 2}, {{4, 1}, 2}, {{3, 1}, 2}});
    Ec.constant = CycloNum(2);
    check_dets(Ec, 2, {3, 4});
}

TEST_CASE("determinants of the convolution square (J_2 blocks)") {
    ExplicitSheaf E = make_sheaf(5, {{{0, 1}, 2}, {{4, 1}, 2}, {{3, 1}, 2}});
    MulChar quad{5, 1, 2};
    SheafData F = kummer_local_data(E);
    Oracle O0(E);
    ExplicitSheaf E1 = E;
    E1.history.push_back({quad, CycloNum(1)});
    Oracle O1(E1);
    ExplicitSheaf E2 = E1;
    E2.history.push_back({quad, CycloNum(1)});
    Oracle O2(E2);
    SheafData F1 = mc_sheaf(F, quad, cv);
    REQUIRE(F1.rank == 2);
    // infinity scalars of the convolution are the H^1_c(A^1 - S) eigenvalues;
    // the determinant formulas only use their product, so store it on one block
    std::vector<CycloNum> w;
    for (long k = 1; k <= 2; ++k) {
        const Field& Fk = get_field(5, k);
        CycloNum acc(0);
        for (long x = 0; x < Fk.q; ++x) acc += O0.trace(0, k, x);
        w.push_back(-acc);
    }
    F1.infinity.blocks[0].alpha = newton_det(w);
    F1.infinity.blocks[0].alpha_known = true;
    F1.infinity.blocks[1].alpha = CycloNum(1);
    F1.infinity.blocks[1].alpha_known = true;
    for (long y : {3L, 4L}) {
        std::vector<CycloNum> pmid;
        for (long k = 1; k <= 2; ++k) {
            long yk = k == 1 ? y : get_embedding(5, 1, k).embed(y);
            pmid.push_back(O1.trace(1, k, yk));
        }
        F1.stalk_det_hint[y] = newton_det(pmid);
    }
    for (long y : {3L, 4L}) {
        CHECK(det_h1c(F1, quad, y, cv) == O2.charpoly(y, 6).back());
        CHECK(det_h1c(F1, quad, y, cv) == CycloNum(25));
        CHECK(det_mc(F1, quad, y, cv) == O2.trace(2, 1, y));
        CHECK(det_mc(F1, quad, y, cv) == CycloNum(5));
    }
}

TEST_CASE("quadratic determinant preservation checks") {
    ExplicitSheaf E = make_sheaf(5, {{{0, 1}, 2}, {{4, 1}, 2}, {{3, 1}, 2}});
    SheafData F = kummer_local_data(E);
    Oracle O0(E);
    for (long y : {3L, 4L}) F.stalk_det_hint[y] = O0.trace(0, 1, y);
    auto rep = quadratic_det_check(F, {3, 4}, cv);
    REQUIRE(rep.input_dets.size() == 2);
    REQUIRE(rep.output_dets.size() == 2);
    for (auto& sp : rep.input_dets) CHECK(sp.m == 0);
    for (auto& sp : rep.output_dets) {
        CHECK(sp.sign == 1);
        CHECK(sp.m == 1);
    }

    // clause (ii): an order-4 inertia character with no inverse partner
    SheafData bad;
    bad.p = 5;
    bad.m = 1;
    bad.rank = 1;
    LocalData L;
    L.residue_degree = 1;
    L.blocks.push_back({1, 1, MulChar{5, 1, 1}, CycloNum(1)});
    bad.singular.emplace_back(PointOrbit{{0, 1}}, L);
    bad.infinity.blocks.push_back({1, 1, MulChar{5, 1, 2}, CycloNum(1)});
    bad.stalk_det_hint[3] = CycloNum(1);
    try {
        quadratic_det_check(bad, {}, cv);
        FAIL("expected HypothesisFailed");
    } catch (const Error& e) {
        CHECK(e.code() == "HypothesisFailed");
        CHECK(std::string(e.what()).find("(ii)") != std::string::npos);
    }

    // clause (iii): a stalk determinant off the signed q-power line
    SheafData F3 = kummer_local_data(E);
    F3.stalk_det_hint[3] = CycloNum::root_of_unity(4, 1);
    try {
        quadratic_det_check(F3, {}, cv);
        FAIL("expected HypothesisFailed");
    } catch (const Error& e) {
        CHECK(e.code() == "HypothesisFailed");
        CHECK(std::string(e.what()).find("(iii)") != std::string::npos);
    }

    // clause (i): infinity monodromy of order 4 is not quadratic
    SheafData F4 = kummer_local_data(make_sheaf(5, {{{0, 1}, 1}, {{4, 1}, 1}, {{3, 1}, 1}}));
    F4.stalk_det_hint[3] = CycloNum(1);
    try {
        quadratic_det_check(F4, {}, cv);
        FAIL("expected HypothesisFailed");
    } catch (const Error& e) {
        CHECK(e.code() == "HypothesisFailed");
        CHECK(std::string(e.what()).find("(i)") != std::string::npos);
    }
}

TEST_CASE("determinant error paths") {
    ExplicitSheaf E = make_sheaf(5, {{{0, 1}, 2}, {{4, 1}, 2}, {{3, 1}, 2}});
    MulChar quad{5, 1, 2};
    SheafData F = kummer_local_data(E);
    F.stalk_det_hint[3] = CycloNum(1);
    CHECK_THROWS_AS(det_h1c(F, quad, 0, cv), Error);                // PointInS
    CHECK_THROWS_AS(det_h1c(F, quad, 4, cv), Error);                // MissingStalkDet
    CHECK_THROWS_AS(det_h1c(F, MulChar{5, 1, 1}, 3, cv), Error);    // NotStandardSituation
    SheafData G = F;
    G.singular[0].second.blocks[0].alpha_known = false;
    CHECK_THROWS_AS(det_h1c(G, quad, 3, cv), Error); // UnknownInvariantScalar
}
