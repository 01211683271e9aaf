#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "mcx/charsum.hpp"

using namespace mcx;

TEST_CASE("gauss sums, pinned small values") {
    CHECK(gauss_sum(MulChar{3, 1, 0}) == CycloNum(1));
    CHECK(gauss_sum(MulChar{7, 1, 0}) == CycloNum(1));
    // quadratic over F_3: -zeta_3 + zeta_3^2, squaring to -3
    auto g3 = gauss_sum(MulChar{3, 1, 1});
    CHECK(g3 == -CycloNum::root_of_unity(3, 1) + CycloNum::root_of_unity(3, 2));
    CHECK(g3 * g3 == CycloNum(-3));
    // order 4 over F_5: paired product is chi(-1) * 5 = -5
    MulChar quart{5, 1, 1};
    CHECK(gauss_sum(quart) * gauss_sum(quart.inverse()) == CycloNum(-5));
}

TEST_CASE("gauss sum absolute value") {
    for (auto [p, m] : std::vector<std::pair<long, long>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {2, 3}}) {
        long Q = get_field(p, m).q;
        for (long e = 1; e < Q - 1; ++e) {
            auto g = gauss_sum(MulChar{p, m, e});
            CHECK(g * g.conj() == CycloNum(Q));
        }
    }
}

TEST_CASE("gauss pair identity") {
    CHECK(gauss_pair_identity_check(MulChar{3, 1, 1}));
    CHECK(gauss_pair_identity_check(MulChar{5, 1, 1}));
    MulChar q7{7, 1, 3};
    CHECK(q7.quadratic());
    CHECK(gauss_pair_identity_check(q7));
    CHECK(gauss_sum(q7) * gauss_sum(q7.inverse()) == CycloNum(-7)); // -1 is a non-square mod 7
    for (long e = 1; e < 8; ++e) CHECK(gauss_pair_identity_check(MulChar{3, 2, e}));
    CHECK_THROWS_AS(gauss_pair_identity_check(MulChar{3, 1, 0}), Error);
}

TEST_CASE("jacobi sums, pinned small values") {
    CHECK(jacobi_sum(MulChar{5, 1, 0}, MulChar{5, 1, 0}) == CycloNum(3)); // q - 2
    CHECK(jacobi_sum(MulChar{7, 1, 0}, MulChar{7, 1, 0}) == CycloNum(5));
    CHECK(jacobi_sum(MulChar{3, 1, 1}, MulChar{3, 1, 1}) == CycloNum(1));
    MulChar a{5, 1, 1}, b{5, 1, 2};
    CHECK(jacobi_sum(a, b) * gauss_sum(a.times(b)) == -(gauss_sum(a) * gauss_sum(b)));
    // chi' = chi^{-1}: J(chi, chi^{-1}) = -chi(-1)
    CHECK(jacobi_sum(a, a.inverse()) == -a.at_minus_one());
    CHECK_THROWS_AS(jacobi_sum(a, MulChar{5, 2, 1}), Error);
}

TEST_CASE("jacobi-gauss relation, exhaustive over small fields") {
    for (auto [p, m] : std::vector<std::pair<long, long>>{
             {3, 1}, {2, 2}, {5, 1}, {7, 1}, {3, 2}, {5, 2}, {3, 3}, {7, 2}}) {
        long Q = get_field(p, m).q;
        std::vector<CycloNum> g(Q - 1);
        for (long e = 0; e < Q - 1; ++e) g[e] = gauss_sum(MulChar{p, m, e});
        for (long e1 = 1; e1 < Q - 1; ++e1)
            for (long e2 = 1; e2 < Q - 1; ++e2) {
                if ((e1 + e2) % (Q - 1) == 0) continue;
                auto J = jacobi_sum(MulChar{p, m, e1}, MulChar{p, m, e2});
                CHECK(J * g[(e1 + e2) % (Q - 1)] == -(g[e1] * g[e2]));
            }
    }
}

TEST_CASE("partitioned accumulation is canonical") {
    // summing the unit group in two halves and merging count maps gives the
    // same exact value; guards the threaded evaluators elsewhere
    MulChar chi{5, 2, 3};
    const Field& F = get_field(5, 2);
    long Q = F.q, p = F.p, N = p * (Q - 1);
    std::map<long, Rat> c1, c2;
    for (long e = 0; e < Q - 1; ++e) {
        auto& c = (e < (Q - 1) / 2) ? c1 : c2;
        c[(p * (chi.e * e % (Q - 1)) + (Q - 1) * F.trace(F.exp(e))) % N] += 1;
    }
    for (auto& [k, v] : c2) c1[k] += v;
    CHECK(-CycloNum::from_root_counts(N, c1) == gauss_sum(chi));
}
