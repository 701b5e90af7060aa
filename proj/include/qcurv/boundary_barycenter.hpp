#pragma once

#include <algorithm>
#include <string>

#include "qcurv/barycenter.hpp"
#include "qcurv/betti_table.hpp"
#include "qcurv/errors.hpp"

namespace qcurv {

/// Inputs of the boundary-weighted barycenter computation: table sources
/// for B_i(dM) and B_i(M/dM) plus the ambient invariants.
struct BoundaryBarycenterInput {
    BarycenterProvider boundary;  // B_i(dM)
    BarycenterProvider quotient;  // B_i(M/dM)
    long long chi_M = 0;
    int dim_M = 2;

    void validate() const {
        if (dim_M < 2) throw data_error("BoundaryBarycenterInput: dim_M must be >= 2");
        if (dim_M % 2 == 0 && boundary.base().euler != 0)
            throw data_error(
                "BoundaryBarycenterInput: even-dimensional M forces chi(dM) = 0");
    }
};

namespace detail {
inline void require_orders(const BoundaryBarycenterInput& in, int boundary_max,
                           int quotient_max) {
    if (in.boundary.max_order() < boundary_max)
        throw data_error("boundary provider cannot resolve order " +
                         std::to_string(boundary_max));
    if (in.quotient.max_order() < quotient_max)
        throw data_error("quotient provider cannot resolve order " +
                         std::to_string(quotient_max));
}
} // namespace detail

/// Reduced homology of the boundary-weighted barycenter space B_l^d(M):
///
///   B_{2m}^d :   B_{2m}(dM)  +  sum_{i=1..m}  B_i(M/dM) * B_{2m-2i}(dM)
///   B_{2m-1}^d : B_{2m-1}(dM) + sum_{i=1..m-1} B_i(M/dM) * B_{2m-1-2i}(dM)
///
/// with the B_0 = {} join convention absorbing the top term of the even
/// case.  l = 1 reduces to the boundary itself.
inline BettiTable boundary_betti(const BoundaryBarycenterInput& in, int l) {
    if (l < 1) throw std::domain_error("boundary_betti: order must be >= 1");
    in.validate();
    const int joins = (l % 2 == 0) ? l / 2 : (l + 1) / 2 - 1;
    detail::require_orders(in, l, joins);

    BettiTable acc = in.boundary.table(l);
    for (int i = 1; i <= joins; ++i)
        acc = direct_sum(acc, join(in.quotient.table(i), in.boundary.table(l - 2 * i)));
    return acc;
}

/// Reduced homology of the intermediate colimit T_i of the strata diagram
/// for B_{2l}^d:  H(T_i) = H(B_{l+i}(dM)) + sum_{j=1..i} H(B_j(M/dM) * B_{l+i-2j}(dM)).
/// T_l is B_{2l}^d and T_{l-1} is B_{2l-1}^d.
inline BettiTable t_i_betti(const BoundaryBarycenterInput& in, int l, int i) {
    if (l < 1) throw std::domain_error("t_i_betti: order must be >= 1");
    if (i < 0 || i > l) throw std::domain_error("t_i_betti: index must lie in [0, l]");
    in.validate();
    detail::require_orders(in, l + i, i);

    BettiTable acc = in.boundary.table(l + i);
    for (int j = 1; j <= i; ++j)
        acc = direct_sum(acc, join(in.quotient.table(j), in.boundary.table(l + i - 2 * j)));
    return acc;
}

/// Euler characteristic of B_l^d(M) for even-dimensional M:
/// chi(B_{2m}^d) = chi(B_m(M)) and chi(B_{2m-1}^d) = chi(B_{m-1}(M)),
/// with chi(B_0) read as 0 (the empty space).  Not claimed for odd
/// dimension.
inline long long euler_boundary(long long chi_M, int order, bool dim_even) {
    if (!dim_even)
        throw std::domain_error("euler_boundary: formula only claimed for even-dimensional M");
    if (order < 1) throw std::domain_error("euler_boundary: order must be >= 1");
    if (order % 2 == 0) return chi_barycenter(chi_M, order / 2);
    int m = (order + 1) / 2;
    return m >= 2 ? chi_barycenter(chi_M, m - 1) : 0;
}

/// chi of the stratum closure B_q^p for even-dimensional M: chi(B_p(M)),
/// degenerating to 0 when p = 0 (chi(B_q(dM)) = 0 there).  The q = 0
/// column means B_p(M) itself, which the same formula covers.
inline long long bqp_euler(long long chi_M, int p, int q) {
    if (p < 0 || q < 0) throw std::domain_error("bqp_euler: negative indices");
    if (p == 0) return 0;
    return chi_barycenter(chi_M, p);
}

/// Reduced homology of the quotient of the stratum closure,
/// Bbar_q^p = B_p(M/dM) * (B_q(dM) v Sigma B_{q-1}(dM)); the q = 1
/// suspension term drops by the B_0 = {} convention.
inline BettiTable bqp_closure_quotient_betti(int p, int q, const BoundaryBarycenterInput& in) {
    if (p < 1 || q < 1)
        throw std::domain_error("bqp_closure_quotient_betti: requires p >= 1 and q >= 1");
    detail::require_orders(in, q, p);
    auto wedge = direct_sum(in.boundary.table(q), suspend(in.boundary.table(q - 1), 1));
    return join(in.quotient.table(p), wedge);
}

/// The two connectivity bounds for B_l^d(M) when M and dM are r-connected,
/// r >= 1.  The source mixes parity conventions, so both formulas are
/// exposed and the minimum reported, with a flag when they disagree.
struct BoundaryConnectivity {
    int even_case;
    int odd_case;
    int reported;
    bool ambiguous;
};

inline BoundaryConnectivity boundary_connectivity(int l, int r) {
    if (r < 1) throw std::domain_error("boundary_connectivity: requires r >= 1");
    if (l < 2) throw std::domain_error("boundary_connectivity: requires l >= 2");
    int even_case = l + r - 2;
    int odd_case = std::min(l + 2 * r - 2, 2 * l + r - 2);
    return {even_case, odd_case, std::min(even_case, odd_case), even_case != odd_case};
}

/// Closed disk D^2: circle boundary, quotient sphere S^2 (order-1 table
/// built in; higher orders of B_i(S^2) must come from user data).
inline BoundaryBarycenterInput disk_input() {
    SpaceDescriptor s2{"sphere2", 2, 2, BettiTable::unreduced({{0, 1}, {2, 1}}), 1};
    auto quotient = BarycenterProvider::from_tables(s2, {});
    return BoundaryBarycenterInput{BarycenterProvider::circle(), std::move(quotient), 1, 2};
}

/// Annulus S^1 x [0,1]: boundary two circles, quotient S^2 v S^1.
inline BoundaryBarycenterInput annulus_input() {
    auto boundary =
        BarycenterProvider::disjoint_union(BarycenterProvider::circle(),
                                           BarycenterProvider::circle());
    SpaceDescriptor q{"sphere2_wedge_circle", 2, 1,
                      BettiTable::unreduced({{0, 1}, {1, 1}, {2, 1}}), 0};
    auto quotient = BarycenterProvider::from_tables(q, {});
    return BoundaryBarycenterInput{std::move(boundary), std::move(quotient), 0, 2};
}

} // namespace qcurv
