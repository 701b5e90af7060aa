#include <catch2/catch_amalgamated.hpp>

#include "qcurv/boundary_barycenter.hpp"
#include "synthetic.hpp"

using namespace qcurv;
using testgen::Rng;

TEST_CASE("disk golden values") {
    auto disk = disk_input();
    // B_2^d(D) comes from S^3 with a circle collapsed: classes in degrees 2, 3
    CHECK(boundary_betti(disk, 2) == BettiTable::reduced({{2, 1}, {3, 1}}));
    // B_1^d = dM
    CHECK(boundary_betti(disk, 1) == BettiTable::sphere(1));
    // B_3^d(D) = B_3(S^1) + S^2 * B_1(S^1)
    CHECK(boundary_betti(disk, 3) ==
          direct_sum(BettiTable::sphere(5), join(BettiTable::sphere(2), BettiTable::sphere(1))));
    // B_4^d needs B_2(S^2), which only user data can supply
    CHECK_THROWS_AS(boundary_betti(disk, 4), data_error);
}

TEST_CASE("annulus-like boundary") {
    auto an = annulus_input();
    // hand-composed: B_2(S^1 u S^1) + H(M/dM)
    auto s1 = BarycenterProvider::circle();
    auto expect = direct_sum(disjoint_union_barycenter(s1, s1, 2),
                             BettiTable::reduced({{1, 1}, {2, 1}}));
    CHECK(boundary_betti(an, 2) == expect);
    CHECK(euler_characteristic(boundary_betti(an, 2)) == 0);
}

TEST_CASE("T_i colimit tables") {
    Rng rng(71);
    auto in = testgen::random_input(rng, -2, 8);
    const int l = 3;
    // i = 0: just B_l(dM)
    CHECK(t_i_betti(in, l, 0) == in.boundary.table(l));
    // i = l and i = l-1 reproduce the boundary-weighted spaces
    CHECK(t_i_betti(in, l, l) == boundary_betti(in, 2 * l));
    CHECK(t_i_betti(in, l, l - 1) == boundary_betti(in, 2 * l - 1));
    CHECK_THROWS_AS(t_i_betti(in, l, l + 1), std::domain_error);
    CHECK_THROWS_AS(t_i_betti(in, l, -1), std::domain_error);
}

TEST_CASE("T_i assembly only ever adds") {
    // each direct summand can only grow the table; check the partial
    // assembly against the full one degree by degree
    Rng rng(72);
    auto in = testgen::random_input(rng, 1, 8);
    for (int i = 1; i <= 3; ++i) {
        auto partial = in.boundary.table(3 + i);
        auto full = t_i_betti(in, 3, i);
        for (auto& [d, r] : partial.ranks()) REQUIRE(full.rank(d) >= r);
    }
    // and for the disk the total rank grows with i
    auto disk = disk_input();
    CHECK(t_i_betti(disk, 1, 0).total_rank() <= t_i_betti(disk, 1, 1).total_rank());
}

TEST_CASE("euler_boundary closed form") {
    for (int order = 1; order <= 12; ++order) CHECK(euler_boundary(0, order, true) == 0);
    CHECK(euler_boundary(1, 2, true) == 1);               // disk: chi(B_1(D)) = 1
    CHECK(euler_boundary(2, 4, true) == chi_barycenter(2, 2));
    CHECK(euler_boundary(2, 4, true) == 1);
    CHECK(euler_boundary(5, 1, true) == 0);               // chi(B_0) = 0
    CHECK_THROWS_AS(euler_boundary(1, 2, false), std::domain_error);
}

TEST_CASE("bqp euler") {
    CHECK(bqp_euler(7, 0, 3) == 0);
    for (int q = 1; q <= 5; ++q) CHECK(bqp_euler(-3, 1, q) == -3);
    CHECK(bqp_euler(1, 2, 1) == 1);
}

TEST_CASE("stratum closure quotient homology") {
    auto disk = disk_input();
    CHECK(bqp_closure_quotient_betti(1, 1, disk) == BettiTable::sphere(4));
    CHECK(bqp_closure_quotient_betti(1, 2, disk) == BettiTable::reduced({{6, 1}, {5, 1}}));
    CHECK_THROWS_AS(bqp_closure_quotient_betti(0, 1, disk), std::domain_error);
}

TEST_CASE("homology assembly is Euler-consistent with the closed form") {
    // structural cross-check of the assembly on random synthetic inputs
    Rng rng(73);
    for (int trial = 0; trial < 25; ++trial) {
        long long chi_M = std::uniform_int_distribution<long long>(-4, 4)(rng);
        auto in = testgen::random_input(rng, chi_M, 12);
        for (int l = 1; l <= 6; ++l)
            REQUIRE(euler_characteristic(boundary_betti(in, l)) ==
                    euler_boundary(chi_M, l, true));
    }
    // and on the built-in disk
    auto disk = disk_input();
    for (int l = 1; l <= 3; ++l)
        CHECK(euler_characteristic(boundary_betti(disk, l)) == euler_boundary(1, l, true));
}

TEST_CASE("inclusion-exclusion identity for chi(B_2l^d)") {
    for (long long chi = -5; chi <= 5; ++chi)
        for (int l = 1; l <= 6; ++l) {
            long long sum = 0;
            for (int i = 0; i <= l; ++i) sum += bqp_euler(chi, i, 2 * l - 2 * i);
            for (int i = 0; i <= l - 1; ++i) sum -= bqp_euler(chi, i, 2 * l - 1 - 2 * i);
            REQUIRE(sum == euler_boundary(chi, 2 * l, true));
        }
}

TEST_CASE("degree support stays below l * dim M") {
    auto disk = disk_input();
    for (int l = 1; l <= 3; ++l) CHECK(boundary_betti(disk, l).top_degree() < l * disk.dim_M);
    Rng rng(74);
    auto in = testgen::random_input(rng, 2, 10);
    for (int l = 1; l <= 5; ++l) CHECK(boundary_betti(in, l).top_degree() < l * in.dim_M);
}

TEST_CASE("input validation") {
    auto bad = disk_input();
    bad.dim_M = 1;
    CHECK_THROWS_AS(boundary_betti(bad, 1), data_error);

    // even dim_M with chi(dM) != 0 is rejected
    SpaceDescriptor s2{"sphere2", 2, 2, BettiTable::unreduced({{0, 1}, {2, 1}}), 1};
    auto sphere_boundary = BarycenterProvider::from_tables(s2, {});
    SpaceDescriptor q{"q", 3, 1, BettiTable::unreduced({{0, 1}}), 0};
    auto quotient = BarycenterProvider::from_tables(q, {});
    BoundaryBarycenterInput in{std::move(sphere_boundary), std::move(quotient), 2, 4};
    CHECK_THROWS_AS(boundary_betti(in, 1), data_error);
}

TEST_CASE("boundary connectivity bounds") {
    auto b = boundary_connectivity(4, 1);
    CHECK(b.even_case == 3);
    CHECK(b.odd_case == std::min(4, 9));
    CHECK(b.reported == 3);
    CHECK(b.ambiguous);
    CHECK_THROWS_AS(boundary_connectivity(4, 0), std::domain_error);
}
