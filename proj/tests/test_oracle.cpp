#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcx/mc.hpp"
#include "mcx/oracle.hpp"

using namespace mcx;

namespace {

// L_q(x) L_q(x-1) L_q(x-2) over F_p, quadratic characters, scalar quadratic
// monodromy at infinity for odd point count
ExplicitSheaf three_point_quadratic(long p) {
    ExplicitSheaf E;
    E.p = p;
    E.m = 1;
    MulChar quad{p, 1, (p - 1) / 2};
    auto& F = get_field(p, 1);
    for (long a : {0L, 1L, 2L}) E.factors.push_back({PointOrbit{{F.neg(a), 1}}, quad});
    return E;
}

} // namespace

TEST_CASE("history-free traces are Kummer character products") {
    ExplicitSheaf E;
    E.p = 5;
    E.m = 1;
    E.factors.push_back({PointOrbit{{0, 1}}, MulChar{5, 1, 2}});
    Oracle O(E);
    CHECK(O.trace(0, 1, 4) == CycloNum(1));  // 4 is a square mod 5
    CHECK(O.trace(0, 1, 2) == CycloNum(-1)); // 2 is not
    CHECK(O.trace(0, 1, 0).is_zero());

    ExplicitSheaf E3;
    E3.p = 3;
    E3.m = 1;
    E3.factors.push_back({PointOrbit{{0, 1}}, MulChar{3, 1, 1}});
    E3.factors.push_back({PointOrbit{{2, 1}}, MulChar{3, 1, 1}}); // x - 1
    Oracle O3(E3);
    CHECK(O3.trace(0, 1, 2) == CycloNum(-1)); // chi(2) chi(1)
    // over F_9 the quadratic character of the norm
    const Field& f9 = get_field(3, 2);
    const Embedding& em = get_embedding(3, 1, 2);
    long x = f9.exp(1); // a generator, nonsquare
    CHECK(O3.trace(0, 2, em.embed(2)) == CycloNum(1));
    CHECK(!O3.trace(0, 2, x).is_zero());
}

TEST_CASE("kummer_local_data extracts scalars and the infinity character") {
    auto E = three_point_quadratic(7);
    auto F = kummer_local_data(E);
    CHECK(F.rank == 1);
    REQUIRE(F.singular.size() == 3);
    // alpha_s = prod_{j != s} chi(s - s_j): (1, -1, 1)
    CHECK(F.singular[0].second.blocks[0].alpha == CycloNum(1));
    CHECK(F.singular[1].second.blocks[0].alpha == CycloNum(-1));
    CHECK(F.singular[2].second.blocks[0].alpha == CycloNum(1));
    CHECK(F.singular[1].second.blocks[0].chi == MulChar{7, 1, 3});
    CHECK(F.infinity.blocks[0].chi == MulChar{7, 1, 3}); // chi^3 = chi
    CHECK(standard_situation(F, MulChar{7, 1, 3}));

    // derivative scalar at a degree-2 point: P = x^2 + 2 over F_5
    ExplicitSheaf E2;
    E2.p = 5;
    E2.m = 1;
    MulChar quad{5, 1, 2};
    E2.factors.push_back({PointOrbit{{0, 1}}, quad});
    E2.factors.push_back({PointOrbit{{2, 0, 1}}, quad});
    auto F2 = kummer_local_data(E2);
    CHECK(F2.singular[1].second.residue_degree == 2);
    // alpha = chi(N(2a)) chi(N(a)) = chi(N(2 a^2)) = chi(N(2) N(a^2)),
    // N(a) = a * a^5 = a^6 = -(-2)... P(0) = 2 so N(a) = 2, N(2) = 4
    CHECK(F2.singular[1].second.blocks[0].alpha ==
          char_eval(quad, get_field(5, 1).wrap(4 * 2 * 2 % 5)));
    CHECK(standard_situation(F2, quad));

    // a constant twist c multiplies alpha_s by c^deg(s) and the infinity
    // scalar by c
    ExplicitSheaf E3 = E2;
    E3.constant = CycloNum(2);
    auto F3 = kummer_local_data(E3);
    CHECK(F3.singular[0].second.blocks[0].alpha ==
          CycloNum(2) * F2.singular[0].second.blocks[0].alpha);
    CHECK(F3.singular[1].second.blocks[0].alpha ==
          CycloNum(4) * F2.singular[1].second.blocks[0].alpha);
    CHECK(F3.infinity.blocks[0].alpha == CycloNum(2));
}

TEST_CASE("level-1 H^1_c traces and characteristic polynomial over F_5") {
    auto E = three_point_quadratic(5);
    E.history.push_back({MulChar{5, 1, 2}, CycloNum(1)});
    Oracle O(E);
    long frozen[6] = {-1, -5, 23, -13, -81, 235};
    for (long k = 1; k <= 6; ++k) CHECK(O.h1c_trace(k, 3) == CycloNum(frozen[k - 1]));
    // eigenvalues {1, -1 + 2i, -1 - 2i}: weight-1 pair plus the kernel line
    auto e = O.charpoly(3, 3);
    CHECK(e[0] == CycloNum(-1));
    CHECK(e[1] == CycloNum(3));
    CHECK(e[2] == CycloNum(5));
    CHECK(O.h1c_det(3, 3) == CycloNum(5));
    CHECK(O.recover_dimension(3, 4) == 3);
    // middle quotient: rank 2, traces mu_1^k + mu_2^k with mu = -1 +- 2i
    long mid[6] = {-2, -6, 22, -14, -82, 234};
    for (long k = 1; k <= 6; ++k) CHECK(O.trace(1, k, 3) == CycloNum(mid[k - 1]));
    CHECK(O.recover_rank(1, 3, 4) == 2);
    CHECK(mc_rank(kummer_local_data(E), MulChar{5, 1, 2}) == 2);
}

TEST_CASE("level-1 kernel carries chi(-1) when -1 is a nonsquare") {
    auto E = three_point_quadratic(7);
    E.history.push_back({MulChar{7, 1, 3}, CycloNum(1)});
    Oracle O(E);
    // raw traces at y = 3 and the middle system raw - (-1)^k of rank 2
    long raw[4] = {-1, -13, -1, 99};
    for (long k = 1; k <= 4; ++k) CHECK(O.h1c_trace(k, 3) == CycloNum(raw[k - 1]));
    long mid[4] = {0, -14, 0, 98}; // eigenvalues +- i sqrt(7)
    for (long k = 1; k <= 4; ++k) CHECK(O.trace(1, k, 3) == CycloNum(mid[k - 1]));
    CHECK(O.recover_rank(1, 3, 3) == 2);
    // invariant stalk traces at the singular points: (-1, 1, -1)
    CHECK(O.trace(1, 1, 0) == CycloNum(-1));
    CHECK(O.trace(1, 1, 1) == CycloNum(1));
    CHECK(O.trace(1, 1, 2) == CycloNum(-1));
}

TEST_CASE("double convolution is the Tate twist times the constant chi(-1)") {
    auto E = three_point_quadratic(7);
    MulChar quad{7, 1, 3};
    E.history.push_back({quad, CycloNum(1)});
    E.history.push_back({quad, CycloNum(1)});
    Oracle O(E);
    Oracle O0(three_point_quadratic(7));
    for (long zb : {3L, 5L}) {
        for (long k = 1; k <= 3; ++k) {
            long z = k == 1 ? zb : get_embedding(7, 1, k).embed(zb);
            CycloNum qk(1);
            for (long i = 0; i < k; ++i) qk = qk * CycloNum(7);
            CycloNum expect = quad.at_minus_one().pow(k) * qk * O0.trace(0, k, z);
            CHECK(O.trace(2, k, z) == expect);
        }
    }
}

TEST_CASE("degree-2 singular point: dimension and rank recovery") {
    ExplicitSheaf E;
    E.p = 5;
    E.m = 1;
    MulChar quad{5, 1, 2};
    E.factors.push_back({PointOrbit{{0, 1}}, quad});
    E.factors.push_back({PointOrbit{{2, 0, 1}}, quad}); // x^2 + 2, irreducible
    E.history.push_back({quad, CycloNum(1)});
    Oracle O(E);
    CHECK(O.recover_dimension(1, 4) == 3); // r * (1 + 2)
    CHECK(O.recover_rank(1, 1, 4) == 2);
    CHECK(mc_rank(kummer_local_data(E), quad) == 2);
}

TEST_CASE("non-standard situation skips the infinity kernel") {
    // single order-4 Kummer factor convolved with the quadratic character:
    // infinity stays ramified, middle rank 1
    ExplicitSheaf E;
    E.p = 5;
    E.m = 1;
    E.factors.push_back({PointOrbit{{0, 1}}, MulChar{5, 1, 1}});
    E.history.push_back({MulChar{5, 1, 2}, CycloNum(1)});
    Oracle O(E);
    CHECK(O.recover_dimension(2, 3) == 1);
    CHECK(O.recover_rank(1, 2, 3) == 1);
}

TEST_CASE("validation rejects malformed explicit sheaves") {
    ExplicitSheaf E;
    E.p = 5;
    E.m = 1;
    E.factors.push_back({PointOrbit{{0, 1}}, MulChar{5, 1, 0}});
    CHECK_THROWS_AS(validate_explicit(E), Error);
    E.factors[0].eta.e = 1;
    CHECK_NOTHROW(validate_explicit(E));
    E.factors.push_back({PointOrbit{{0, 1}}, MulChar{5, 1, 2}});
    CHECK_THROWS_AS(validate_explicit(E), Error);
    E.factors.pop_back();
    E.history.push_back({MulChar{5, 1, 0}, CycloNum(1)});
    CHECK_THROWS_AS(validate_explicit(E), Error);
}
