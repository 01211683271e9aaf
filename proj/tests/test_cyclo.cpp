#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mcx/cyclo.hpp"

using mcx::CycloNum;
using mcx::Rat;

TEST_CASE("cyclotomic polynomials") {
    auto& p1 = mcx::cyclotomic_poly(1); // x - 1
    CHECK(p1.size() == 2);
    auto& p4 = mcx::cyclotomic_poly(4); // x^2 + 1
    CHECK(p4.size() == 3);
    CHECK(p4[0] == 1);
    CHECK(p4[1] == 0);
    // degree phi(N) and Phi_N(1) in {p for prime powers, 1 otherwise}
    for (long n : {2L, 3L, 5L, 6L, 8L, 9L, 12L, 15L, 24L, 36L, 105L}) {
        auto& p = mcx::cyclotomic_poly(n);
        CHECK((long)p.size() - 1 == mcx::euler_phi(n));
        mcx::Int at1 = 0;
        for (auto& c : p) at1 += c;
        long m = n, smallest = 0;
        for (long q = 2; q * q <= m; ++q)
            if (m % q == 0) { smallest = q; break; }
        if (!smallest) smallest = m;
        long red = n;
        while (red % smallest == 0) red /= smallest;
        CHECK(at1 == ((red == 1) ? smallest : 1));
    }
}

TEST_CASE("roots of unity") {
    CHECK(CycloNum::root_of_unity(1, 0) == CycloNum(1));
    auto i = CycloNum::root_of_unity(4, 1);
    CHECK(i * i == CycloNum(-1));
    auto z3 = CycloNum::root_of_unity(3, 1);
    CHECK(z3 + z3 * z3 == CycloNum(-1));
    CHECK(z3 * z3 * z3 == CycloNum(1));
    CHECK(z3.pow(2) == CycloNum::root_of_unity(3, 2));
}

TEST_CASE("arithmetic and inverse") {
    auto i = CycloNum::root_of_unity(4, 1);
    auto one_plus_i = CycloNum(1) + i;
    auto inv = one_plus_i.inv();
    CHECK(inv * one_plus_i == CycloNum(1));
    // (1+i)^-1 = (1-i)/2
    CHECK(inv == (CycloNum(1) - i) * CycloNum(Rat(1, 2)));
    CHECK(CycloNum::root_of_unity(5, 1).conj() == CycloNum::root_of_unity(5, 4));
    CHECK_THROWS_AS(CycloNum().inv(), mcx::Error);
}

TEST_CASE("conductor lifting compatibility") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        long n1 = 2 + (long)(rng() % 10), n2 = 2 + (long)(rng() % 10);
        auto a = CycloNum::root_of_unity(n1, (long)(rng() % n1)) + CycloNum((long)(rng() % 5));
        auto b = CycloNum::root_of_unity(n2, (long)(rng() % n2)) - CycloNum((long)(rng() % 5));
        long m = std::lcm(std::lcm(n1, n2), 8L);
        CHECK((a * b) == a.lifted(m) * b.lifted(m));
        CHECK((a + b) == a.lifted(m) + b);
    }
}

TEST_CASE("field axioms on random triples") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        long n = 2 + (long)(rng() % 30);
        auto r = [&]() {
            return CycloNum::root_of_unity(n, (long)(rng() % n)) +
                   CycloNum(Rat((long)(rng() % 7) - 3, 1 + (long)(rng() % 4)));
        };
        auto a = r(), b = r(), c = r();
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) CHECK(a * a.inv() == CycloNum(1));
    }
}

TEST_CASE("signed power recognition") {
    CHECK(CycloNum(-9).signed_power_of(3) == std::make_pair(-1, 2L));
    CHECK(CycloNum(Rat(1, 5)).signed_power_of(5) == std::make_pair(1, -1L));
    CHECK(CycloNum(1).signed_power_of(7) == std::make_pair(1, 0L));
    auto z = CycloNum::root_of_unity(3, 1) * CycloNum(3);
    CHECK(!z.signed_power_of(3).has_value());
    CHECK(!CycloNum(6).signed_power_of(3).has_value());
    CHECK_THROWS_AS(CycloNum().signed_power_of(3), mcx::Error);
}

TEST_CASE("from_root_counts matches term-by-term sums") {
    std::map<long, Rat> counts;
    CycloNum direct;
    for (long e = 0; e < 12; ++e) {
        counts[e] += Rat(e % 5 - 2);
        direct += CycloNum(Rat(e % 5 - 2)) * CycloNum::root_of_unity(12, e);
    }
    CHECK(CycloNum::from_root_counts(12, counts) == direct);
}
