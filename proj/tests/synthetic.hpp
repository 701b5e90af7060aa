#pragma once

// Synthetic boundary-barycenter inputs: random tables constrained only by
// the invariants every genuine provider satisfies (Euler closed form and
// dimension bound).  Used to cross-check the homology assembly against the
// Euler closed forms on inputs with no special structure.

#include <map>
#include <random>
#include <string>

#include "qcurv/barycenter.hpp"
#include "qcurv/boundary_barycenter.hpp"
#include "generators.hpp"

namespace qcurv::testgen {

/// Random reduced table with a prescribed alternating sum, supported in
/// degrees [min_deg, max_deg] (range must span both parities).
inline BettiTable random_table_with_alt_sum(Rng& rng, long long target, int min_deg,
                                            int max_deg) {
    std::uniform_int_distribution<int> deg(min_deg, max_deg);
    std::uniform_int_distribution<int> count(0, 4);
    std::uniform_int_distribution<long long> rank(1, 3);
    BettiTable::rank_map m;
    int n = count(rng);
    for (int i = 0; i < n; ++i) m[deg(rng)] += rank(rng);

    long long alt = 0;
    for (auto& [d, r] : m) alt += (d % 2 == 0) ? r : -r;
    long long diff = target - alt;
    if (diff != 0) {
        int parity = diff > 0 ? 0 : 1;
        int d = (min_deg % 2 == parity) ? min_deg : min_deg + 1;
        if (d > max_deg) { // range holds one parity only; rebuild minimally
            m.clear();
            d = min_deg;
            if ((d % 2 == 0) != (target >= 0) && target != 0)
                throw std::logic_error("random_table_with_alt_sum: unreachable target");
            if (target != 0) m[d] = target >= 0 ? target : -target;
            return BettiTable::reduced(std::move(m));
        }
        m[d] += diff > 0 ? diff : -diff;
    }
    return BettiTable::reduced(std::move(m));
}

/// Provider over a base with homological dimension h whose order-n tables
/// are random but Euler-consistent, for n = 1..max_order.
inline BarycenterProvider random_provider(Rng& rng, SpaceDescriptor base, int max_order) {
    std::map<int, BettiTable> tabs;
    tabs.emplace(1, base.betti.to_reduced());
    int h = base.homological_dimension();
    for (int n = 2; n <= max_order; ++n) {
        long long alt = chi_barycenter(base.euler, n) - 1;
        tabs.emplace(n, random_table_with_alt_sum(rng, alt, 1, n * h + n - 1));
    }
    return BarycenterProvider::from_tables(std::move(base), std::move(tabs));
}

/// Synthetic even-dimensional input with chi(dM) = 0 enforced, boundary
/// tables resolvable to max_l and quotient tables to max_l / 2.
inline BoundaryBarycenterInput random_input(Rng& rng, long long chi_M, int max_l) {
    SpaceDescriptor bd{"synthetic_boundary", 3, 0,
                       BettiTable::unreduced({{0, 1}, {3, 1}}), 0};
    auto boundary = random_provider(rng, bd, max_l);

    long long chi_q = chi_M + 1;
    BettiTable::rank_map qb{{0, 1}};
    if (chi_q >= 2) {
        qb[2] = chi_q - 1;
    } else if (chi_q == 1) {
        qb[1] = 1;
        qb[2] = 1;
    } else {
        qb[1] = 1 - chi_q;
    }
    SpaceDescriptor qd{"synthetic_quotient", 2, chi_q, BettiTable::unreduced(std::move(qb)), 0};
    auto quotient = random_provider(rng, qd, max_l / 2 + 1);

    return BoundaryBarycenterInput{std::move(boundary), std::move(quotient), chi_M, 4};
}

} // namespace qcurv::testgen
