#include <catch2/catch_amalgamated.hpp>

#include "qcurv/barycenter.hpp"

using namespace qcurv;

namespace {

// n-choose-k oracle, small inputs only
long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BarycenterProvider point_provider() {
    SpaceDescriptor pt{"point", 0, 1, BettiTable::unreduced({{0, 1}}), 0};
    std::map<int, BettiTable> tabs;
    for (int n = 1; n <= 6; ++n) tabs.emplace(n, BettiTable::point());
    return BarycenterProvider::from_tables(pt, std::move(tabs));
}

} // namespace

TEST_CASE("chi_barycenter closed form") {
    for (int l = 1; l <= 20; ++l) CHECK(chi_barycenter(0, l) == 0);
    CHECK(chi_barycenter(2, 1) == 2);
    CHECK(chi_barycenter(1, 2) == 1); // 1 - (1/2)(0)(1)
    CHECK_THROWS_AS(chi_barycenter(1, 0), std::domain_error);
    CHECK_THROWS_AS(chi_barycenter(3, -2), std::domain_error);

    // chi <= 0: the product is binomial(l - chi, l)
    for (int chi = -6; chi <= 0; ++chi)
        for (int l = 1; l <= 8; ++l)
            CHECK(chi_barycenter(chi, l) == 1 - binom(l - chi, l));
    // chi >= l + 1: all factors negative, sign (-1)^l
    for (int chi = 3; chi <= 8; ++chi)
        for (int l = 1; l < chi; ++l) {
            long long expect = 1 - ((l % 2 == 0) ? 1 : -1) * binom(chi - 1, l);
            CHECK(chi_barycenter(chi, l) == expect);
        }
    // a zero factor whenever 1 <= chi <= l
    for (int chi = 1; chi <= 6; ++chi)
        for (int l = chi; l <= 8; ++l) CHECK(chi_barycenter(chi, l) == 1);
}

TEST_CASE("chi_barycenter stays exact for large arguments") {
    // 1 - binom(120, 20) does not fit the naive product in 64 bits
    CHECK_THROWS_AS(chi_barycenter(-100, 40), std::overflow_error);
    CHECK(chi_barycenter(-40, 20) == 1 - binom(60, 20));
}

TEST_CASE("circle barycenter tables are odd spheres") {
    CHECK(circle_barycenter_table(1) == BettiTable::sphere(1));
    CHECK(circle_barycenter_table(2) == BettiTable::sphere(3));
    CHECK(circle_barycenter_table(3) == BettiTable::sphere(5));
    CHECK_THROWS_AS(circle_barycenter_table(0), std::domain_error);
}

TEST_CASE("connectivity of barycenter spaces") {
    CHECK(connectivity_of_barycenter(1, 1) == 1);
    CHECK(connectivity_of_barycenter(2, 3) == 6);
    // S^1 is only 0-connected, so B_2(S^1) = S^3 (exactly 2-connected) is
    // consistent with the formula demanding r >= 1: a 1-connected base
    // would force B_2 to be 3-connected, which S^3 is not.
    CHECK(connectivity_of_barycenter(1, 2) == 3);
    CHECK_THROWS_AS(connectivity_of_barycenter(0, 2), std::domain_error);
}

TEST_CASE("disjoint union of two circles") {
    auto s1 = BarycenterProvider::circle();

    // order 3: wedge of four S^5 and three S^4
    CHECK(disjoint_union_barycenter(s1, s1, 3) == BettiTable::reduced({{5, 4}, {4, 3}}));

    // order 2 frozen from the Kunneth oracle:
    //   B_2(S^1) v Sigma(S^1 x S^1) v B_2(S^1)
    //   = S^3 v Sigma(torus) v S^3 = {3:1} + {2:2,3:1} + {3:1}
    auto torus = product_homology(BettiTable::sphere(1), BettiTable::sphere(1));
    auto oracle = direct_sum(direct_sum(BettiTable::sphere(3), suspend(torus, 1)),
                             BettiTable::sphere(3));
    REQUIRE(oracle == BettiTable::reduced({{3, 3}, {2, 2}}));
    CHECK(disjoint_union_barycenter(s1, s1, 2) == oracle);

    CHECK_THROWS_AS(disjoint_union_barycenter(s1, s1, 1), std::domain_error);
}

TEST_CASE("l = 2 route agrees with the general wedge at l = 2") {
    auto s1 = BarycenterProvider::circle();
    // general wedge terms at l = 2, assembled by hand
    auto general = direct_sum(direct_sum(s1.table(2), suspend(s1.table(1), 1)),
                              direct_sum(s1.table(2), suspend(s1.table(1), 1)));
    general = direct_sum(general, join(s1.table(1), s1.table(1)));
    CHECK(general == disjoint_union_barycenter(s1, s1, 2));
}

TEST_CASE("union of contractible constituents degenerates") {
    auto pt = point_provider();
    CHECK(disjoint_union_barycenter(pt, pt, 2) == BettiTable::point());
}

TEST_CASE("union table euler characteristic matches the closed form") {
    auto s1 = BarycenterProvider::circle();
    auto un = BarycenterProvider::disjoint_union(s1, s1);
    for (int l = 2; l <= 6; ++l) {
        auto t = un.table(l);
        CHECK(euler_characteristic(t) == chi_barycenter(0, l));
        // vanishing range: degrees in [1, l (h+1) - 1] with h(S^1 u S^1) = 1
        CHECK(t.rank(0) == 0);
        CHECK(t.top_degree() <= 2 * l - 1);
    }
    CHECK(un.table(0).is_empty_space());
    CHECK(euler_characteristic(un.table(1)) == 0);
}

TEST_CASE("union is symmetric in its constituents") {
    SpaceDescriptor wedge2{"wedge2", 1, -1, BettiTable::unreduced({{0, 1}, {1, 2}}), 0};
    std::map<int, BettiTable> tabs;
    tabs.emplace(1, wedge2.betti.to_reduced());
    // chi(B_2) = 1 - (1/2)(2)(3) = -2 -> reduced alternating sum -3
    tabs.emplace(2, BettiTable::reduced({{2, 1}, {3, 4}}));
    // chi(B_3) = 1 - (1/6)(2)(3)(4) = -3 -> reduced alternating sum -4
    tabs.emplace(3, BettiTable::reduced({{3, 4}, {4, 2}, {5, 2}}));
    auto w = BarycenterProvider::from_tables(wedge2, tabs);
    auto s1 = BarycenterProvider::circle();
    for (int l = 2; l <= 3; ++l)
        CHECK(disjoint_union_barycenter(w, s1, l) == disjoint_union_barycenter(s1, w, l));
}

TEST_CASE("provider rejects inconsistent user tables") {
    auto base = circle_descriptor();

    // Euler closed form violated: chi(B_2(S^1)) must be 0, {2:1} gives 2
    std::map<int, BettiTable> bad_chi{{2, BettiTable::reduced({{2, 1}})}};
    CHECK_THROWS_AS(BarycenterProvider::from_tables(base, bad_chi), data_error);

    // order-1 table must be the base space itself
    std::map<int, BettiTable> bad_b1{{1, BettiTable::sphere(2)}};
    CHECK_THROWS_AS(BarycenterProvider::from_tables(base, bad_b1), data_error);

    // homological dimension bound: B_2(S^1) lives in degrees <= 3
    std::map<int, BettiTable> bad_dim{{2, BettiTable::reduced({{5, 1}, {4, 1}, {3, 1}})}};
    CHECK_THROWS_AS(BarycenterProvider::from_tables(base, bad_dim), data_error);

    // connectivity bound: B_2 of a 2-connected space is 4-connected
    SpaceDescriptor s3{"threesphere", 3, 0, BettiTable::unreduced({{0, 1}, {3, 1}}), 2};
    std::map<int, BettiTable> bad_conn{{2, BettiTable::reduced({{4, 1}, {7, 1}})}};
    CHECK_THROWS_AS(BarycenterProvider::from_tables(s3, bad_conn), data_error);

    // and a consistent one loads
    std::map<int, BettiTable> good{{2, BettiTable::sphere(3)}};
    auto p = BarycenterProvider::from_tables(base, good);
    CHECK(p.table(2) == BettiTable::sphere(3));
    CHECK(p.table(0).is_empty_space());
    CHECK_THROWS_AS(p.table(3), data_error);
    CHECK(p.max_order() == 2);
}

TEST_CASE("space descriptor validation") {
    SpaceDescriptor bad{"bad", 2, 5, BettiTable::unreduced({{0, 1}, {2, 1}}), 0};
    CHECK_THROWS_AS(bad.validate(), data_error);
    SpaceDescriptor overconn{"oc", 1, 0, BettiTable::unreduced({{0, 1}, {1, 1}}), 3};
    CHECK_THROWS_AS(overconn.validate(), data_error);
}
