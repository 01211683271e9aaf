#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcx/localdata.hpp"

using namespace mcx;

namespace {

TameBlock blk(long n, long l, MulChar chi, CycloNum a) { return {n, l, chi, std::move(a), true}; }

} // namespace

TEST_CASE("point orbits: roots and irreducibility") {
    auto& f3 = get_field(3, 1);
    // x^2 + 1 over F_3 is irreducible, roots in F_9 only
    std::vector<long> p1{1, 0, 1};
    CHECK(poly_irreducible_over(f3, p1));
    CHECK(poly_roots_in(f3, p1, 1).empty());
    CHECK(poly_roots_in(f3, p1, 2).size() == 2);
    // x^2 - 1 splits
    CHECK(!poly_irreducible_over(f3, {2, 0, 1}));
    // product of two irreducible quadratics: all roots in F_9, none rational
    // (x^2+1)(x^2+x+2) = x^4 + x^3 + x + 2 over F_3
    std::vector<long> p2{2, 1, 0, 1, 1};
    CHECK(!poly_irreducible_over(f3, p2));
    CHECK(poly_roots_in(f3, p2, 1).empty());
    // an irreducible quartic over F_3
    std::vector<long> p3{2, 1, 0, 0, 1}; // x^4 + x + 2
    CHECK(poly_irreducible_over(f3, p3) == (poly_roots_in(f3, p3, 2).empty() &&
                                            poly_roots_in(f3, p3, 4).size() == 4));
    // non-monic rejected
    CHECK(!poly_irreducible_over(f3, {1, 2}));
}

TEST_CASE("graded pieces of the monodromy filtration") {
    Conventions bottom{false, 1}, top{true, 1};
    MulChar chi{3, 1, 1}, triv{3, 1, 0};
    auto g1 = gr_M(blk(1, 1, chi, CycloNum(5)), 3, bottom);
    REQUIRE(g1.size() == 1);
    CHECK(g1[0].second == CycloNum(5));
    auto g2 = gr_M(blk(2, 1, triv, CycloNum(1)), 3, bottom);
    REQUIRE(g2.size() == 2);
    CHECK(g2[0].second == CycloNum(1));
    CHECK(g2[1].second == CycloNum(3));
    // deg(s) = 2: steps of q_s^l = 9
    MulChar chi2{3, 2, 1};
    LocalData L;
    auto g3 = gr_M(TameBlock{3, 1, chi2, CycloNum(2), true}, 9, bottom);
    REQUIRE(g3.size() == 3);
    CHECK(g3[1].second == CycloNum(18));
    CHECK(g3[2].second == CycloNum(2 * 81));
    // top convention: the stored scalar is the last graded piece
    auto g4 = gr_M(blk(2, 1, triv, CycloNum(3)), 3, top);
    CHECK(g4[0].second == CycloNum(1));
    CHECK(g4[1].second == CycloNum(3));
    // dimension and character multiset preserved
    auto b5 = blk(4, 1, chi, CycloNum(7));
    CHECK(gr_M(b5, 3, bottom).size() == (size_t)b5.n);
}

TEST_CASE("quotient by invariants") {
    MulChar chi{5, 1, 1}, triv{5, 1, 0};
    LocalData L;
    L.residue_degree = 1;
    L.blocks = {blk(2, 1, chi, CycloNum(3)), blk(1, 1, triv, CycloNum(2)), blk(3, 1, triv, CycloNum(1))};
    CHECK(L.rank() == 6);
    CHECK(L.invariant_dim() == 2);
    Conventions cv{false, 1};
    auto Q = quotient_by_invariants(L, 5, cv);
    CHECK(Q.rank() == L.rank() - L.invariant_dim());
    REQUIRE(Q.blocks.size() == 2);
    CHECK(Q.blocks[0].alpha == CycloNum(3)); // nontrivial chi untouched
    CHECK(Q.blocks[1].n == 2);
    CHECK(Q.blocks[1].alpha == CycloNum(5)); // t = 1 twist
    Conventions cv0{false, 0};
    CHECK(quotient_by_invariants(L, 5, cv0).blocks[1].alpha == CycloNum(1));
    // degree-2 point: twist by q_s = 25
    LocalData L2;
    L2.residue_degree = 2;
    L2.blocks = {blk(2, 1, MulChar{5, 2, 0}, CycloNum(1))};
    CHECK(quotient_by_invariants(L2, 5, cv).blocks[0].alpha == CycloNum(25));
}

TEST_CASE("tate and unramified twists") {
    MulChar chi{3, 1, 1};
    LocalData L;
    L.blocks = {blk(1, 1, chi, CycloNum(2))};
    CHECK(tate_twist(L, 3, 0).blocks[0].alpha == CycloNum(2));
    CHECK(tate_twist(L, 3, -1).blocks[0].alpha == CycloNum(6));
    CHECK(tate_twist(tate_twist(L, 3, 2), 3, -1).blocks[0].alpha ==
          tate_twist(L, 3, 1).blocks[0].alpha);
    // l = 2 blocks scale by beta^2 and by q_s^{-m l}
    LocalData L2;
    L2.blocks = {TameBlock{1, 2, MulChar{3, 2, 1}, CycloNum(1), true}};
    CHECK(twist_unramified(L2, CycloNum(5)).blocks[0].alpha == CycloNum(25));
    CHECK(tate_twist(L2, 3, 1).blocks[0].alpha == CycloNum(Rat(1, 9)));
    CHECK(twist_unramified(L, CycloNum(1)).blocks[0].alpha == CycloNum(2));
    auto both = twist_unramified(tate_twist(L, 3, 1), CycloNum(7));
    auto both2 = tate_twist(twist_unramified(L, CycloNum(7)), 3, 1);
    CHECK(both.blocks[0].alpha == both2.blocks[0].alpha);
    CHECK_THROWS_AS(twist_unramified(L, CycloNum()), Error);
}

TEST_CASE("kummer scalar at a closed point") {
    auto& f3 = get_field(3, 1);
    MulChar quad{3, 1, 1}, triv{3, 1, 0};
    // rational point a = 1: chi(y0 - a)
    PointOrbit s1{{f3.neg(1), 1}}; // x - 1
    CHECK(kummer_scalar_at(quad, f3, s1, 0) == CycloNum(-1)); // chi(-1)
    CHECK(kummer_scalar_at(quad, f3, s1, 2) == CycloNum(1));  // chi(1)
    CHECK(kummer_scalar_at(triv, f3, s1, 0) == CycloNum(1));
    CHECK_THROWS_AS(kummer_scalar_at(quad, f3, s1, 1), Error);
    // degree-2 orbit x^2 + 1 at y0 = 0: chi(P(0)) = chi(1) = 1
    PointOrbit s2{{1, 0, 1}};
    CHECK(kummer_scalar_at(quad, f3, s2, 0) == CycloNum(1));
    // dual route: chi(N(y0 - x_s)) through the extension field norm
    auto roots = poly_roots_in(f3, s2.poly, 2);
    REQUIRE(roots.size() == 2);
    auto& f9 = get_field(3, 2);
    auto& emb = get_embedding(3, 1, 2);
    for (long y0 : {0L, 1L, 2L}) {
        long diff = f9.sub(emb.embed(y0), roots[0]);
        CHECK(kummer_scalar_at(quad, f3, s2, y0) == norm_and_char(quad, f9.wrap(diff)));
        // sign flip multiplies by chi(-1)^deg = 1 for even degree
        CHECK(kummer_scalar_at(quad, f3, s2, y0, -1) == kummer_scalar_at(quad, f3, s2, y0));
    }
    // odd degree: sign flip is chi(-1)
    CHECK(kummer_scalar_at(quad, f3, s1, 0, -1) == -kummer_scalar_at(quad, f3, s1, 0));
}

TEST_CASE("sheaf validation and the scalar infinity test") {
    SheafData F;
    F.p = 3;
    F.m = 1;
    F.rank = 1;
    MulChar quad{3, 1, 1};
    LocalData at1;
    at1.blocks = {blk(1, 1, quad, CycloNum(1))};
    F.singular = {{PointOrbit{{get_field(3, 1).neg(1), 1}}, at1}};
    F.infinity.blocks = {blk(1, 1, quad, CycloNum(1))};
    CHECK_NOTHROW(validate_sheaf(F));
    auto sc = scalar_infinity_char(F);
    REQUIRE(sc.has_value());
    CHECK(*sc == quad);
    // rank mismatch is rejected
    SheafData bad = F;
    bad.rank = 2;
    CHECK_THROWS_AS(validate_sheaf(bad), Error);
    // trivial chi with l = 2 is rejected
    SheafData bad2 = F;
    bad2.singular[0].second.blocks = {TameBlock{1, 1, MulChar{3, 1, 0}, CycloNum(1), true}};
    CHECK_NOTHROW(validate_local(bad2.singular[0].second, 3, 1));
    LocalData badL;
    badL.blocks = {TameBlock{1, 2, MulChar{3, 2, 0}, CycloNum(1), true}};
    CHECK_THROWS_AS(validate_local(badL, 3, 1), Error);
    // mixed characters at infinity are not scalar
    SheafData F2 = F;
    F2.rank = 2;
    F2.singular[0].second.blocks.push_back(blk(1, 1, MulChar{3, 1, 0}, CycloNum(1)));
    F2.infinity.blocks.push_back(blk(1, 1, MulChar{3, 1, 0}, CycloNum(1)));
    CHECK(!scalar_infinity_char(F2).has_value());
}
