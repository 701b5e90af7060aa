#pragma once

#include <climits>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcurv/betti_table.hpp"
#include "qcurv/errors.hpp"

namespace qcurv {

/// Euler characteristic of the barycenter space B_l(X) from chi(X),
/// via the closed form  chi(B_l) = 1 - (1/l!)(1-chi)(2-chi)...(l-chi).
/// The product of l consecutive integers is divisible by l!, so the
/// result is an exact integer; big-integer arithmetic keeps it exact for
/// any desk-scale l and chi.
inline long long chi_barycenter(long long chi, int l) {
    if (l < 1) throw std::domain_error("chi_barycenter: order must be >= 1");
    namespace mp = boost::multiprecision;
    mp::cpp_int num = 1;
    for (int i = 1; i <= l; ++i) num *= mp::cpp_int(i) - chi;
    mp::cpp_int fact = 1;
    for (int i = 2; i <= l; ++i) fact *= i;
    mp::cpp_int q = num / fact;
    if (q * fact != num) throw std::logic_error("chi_barycenter: division not exact");
    mp::cpp_int res = 1 - q;
    if (res > LLONG_MAX || res < LLONG_MIN)
        throw std::overflow_error("chi_barycenter: result exceeds 64 bits");
    return static_cast<long long>(res);
}

/// Reduced table of B_n(S^1), a (2n-1)-sphere.
inline BettiTable circle_barycenter_table(int n) {
    if (n < 1) throw std::domain_error("circle_barycenter_table: order must be >= 1");
    return BettiTable::sphere(2 * n - 1);
}

/// Connectivity of B_n(X) for an r-connected X, r >= 1: B_n is
/// (2n + r - 2)-connected.
inline int connectivity_of_barycenter(int r, int n) {
    if (r < 1) throw std::domain_error("connectivity_of_barycenter: requires r >= 1");
    if (n < 1) throw std::domain_error("connectivity_of_barycenter: requires n >= 1");
    return 2 * n + r - 2;
}

/// Named topological input: a space together with the invariants the
/// engine consumes.  `betti` is unreduced; `connectivity` is the largest r
/// such that the space is r-connected (-1 when possibly disconnected).
struct SpaceDescriptor {
    std::string name;
    int dimension = 0;
    long long euler = 0;
    BettiTable betti = BettiTable::unreduced({{0, 1}});
    int connectivity = -1;

    void validate() const {
        if (betti.is_reduced() || betti.is_empty_space())
            throw data_error("SpaceDescriptor '" + name + "': betti table must be unreduced");
        if (euler != euler_characteristic(betti))
            throw data_error("SpaceDescriptor '" + name +
                             "': euler does not match the betti table");
        if (connectivity > dimension)
            throw data_error("SpaceDescriptor '" + name + "': connectivity exceeds dimension");
        if (dimension < 0) throw data_error("SpaceDescriptor '" + name + "': negative dimension");
    }

    /// Homological dimension: top degree of the unreduced table.
    int homological_dimension() const { return std::max(betti.top_degree(), 0); }
};

inline SpaceDescriptor circle_descriptor() {
    return SpaceDescriptor{"circle", 1, 0, BettiTable::unreduced({{0, 1}, {1, 1}}), 0};
}

class BarycenterProvider;
BettiTable disjoint_union_barycenter(const BarycenterProvider& a, const BarycenterProvider& b,
                                     int l);

/// Source of reduced Betti tables for the barycenter spaces B_n(X) of one
/// base space X.  B_0 is the empty space by convention.  User-supplied
/// tables are validated against the Euler closed form, the connectivity
/// bound, and the homological dimension bound on load; inconsistent data
/// is rejected outright so that downstream certification never consumes
/// bad topology.
class BarycenterProvider {
public:
    enum class Source { circle, user_tables, disjoint_union };

    static BarycenterProvider circle() {
        BarycenterProvider p;
        p.source_ = Source::circle;
        p.base_ = circle_descriptor();
        return p;
    }

    static BarycenterProvider from_tables(SpaceDescriptor base,
                                          std::map<int, BettiTable> tables) {
        base.validate();
        BarycenterProvider p;
        p.source_ = Source::user_tables;
        p.base_ = std::move(base);
        p.tables_ = std::move(tables);

        auto base_reduced = p.base_.betti.to_reduced();
        auto it1 = p.tables_.find(1);
        if (it1 == p.tables_.end()) {
            p.tables_.emplace(1, base_reduced);
        } else if (it1->second != base_reduced) {
            throw data_error("provider '" + p.base_.name +
                             "': order-1 table must equal the base space table");
        }
        for (auto& [n, t] : p.tables_) p.validate_table(n, t);
        return p;
    }

    static BarycenterProvider disjoint_union(BarycenterProvider a, BarycenterProvider b) {
        BarycenterProvider p;
        p.source_ = Source::disjoint_union;
        p.base_.name = a.base_.name + "+" + b.base_.name;
        p.base_.dimension = std::max(a.base_.dimension, b.base_.dimension);
        p.base_.euler = a.base_.euler + b.base_.euler;
        p.base_.betti = direct_sum(a.base_.betti, b.base_.betti);
        p.base_.connectivity = -1; // a disjoint union is disconnected
        p.left_ = std::make_shared<BarycenterProvider>(std::move(a));
        p.right_ = std::make_shared<BarycenterProvider>(std::move(b));
        return p;
    }

    Source source() const { return source_; }
    const SpaceDescriptor& base() const { return base_; }

    /// Largest order this provider can resolve.
    int max_order() const {
        switch (source_) {
            case Source::circle: return INT_MAX;
            case Source::user_tables: return tables_.empty() ? 0 : tables_.rbegin()->first;
            case Source::disjoint_union:
                return std::min(left_->max_order(), right_->max_order());
        }
        return 0;
    }

    /// Reduced table of B_n(X); n = 0 yields the empty-space sentinel.
    BettiTable table(int n) const {
        if (n < 0) throw std::domain_error("BarycenterProvider: negative order");
        if (n == 0) return BettiTable::empty_space();
        switch (source_) {
            case Source::circle: return circle_barycenter_table(n);
            case Source::user_tables: {
                auto it = tables_.find(n);
                if (it == tables_.end())
                    throw data_error("provider '" + base_.name + "': no table for order " +
                                     std::to_string(n));
                return it->second;
            }
            case Source::disjoint_union:
                if (n == 1) {
                    // B_1(A u B) = A u B: extra component class in degree 0
                    return direct_sum(direct_sum(left_->table(1), right_->table(1)),
                                      BettiTable::sphere(0));
                }
                return disjoint_union_barycenter(*left_, *right_, n);
        }
        throw std::logic_error("BarycenterProvider: bad source");
    }

private:
    BarycenterProvider() = default;

    void validate_table(int n, const BettiTable& t) const {
        if (n < 1) throw data_error("provider '" + base_.name + "': table order must be >= 1");
        if (!t.is_reduced() || t.is_empty_space())
            throw data_error("provider '" + base_.name + "': tables must be reduced");
        if (euler_characteristic(t) != chi_barycenter(base_.euler, n))
            throw data_error("provider '" + base_.name + "': order-" + std::to_string(n) +
                             " table violates the Euler closed form");
        if (base_.connectivity >= 1) {
            int c = connectivity_of_barycenter(base_.connectivity, n);
            for (auto& [d, r] : t.ranks())
                if (d <= c)
                    throw data_error("provider '" + base_.name + "': order-" +
                                     std::to_string(n) + " table violates the connectivity bound");
        }
        int hdim = n * base_.homological_dimension() + n - 1;
        if (t.top_degree() > hdim)
            throw data_error("provider '" + base_.name + "': order-" + std::to_string(n) +
                             " table exceeds the homological dimension bound");
    }

    Source source_ = Source::user_tables;
    SpaceDescriptor base_;
    std::map<int, BettiTable> tables_;
    std::shared_ptr<const BarycenterProvider> left_, right_;
};

/// Reduced homology of B_l(A u B) for disjoint connected A, B and l >= 2.
///
/// For l >= 3 this assembles the wedge
///   B_l(A) v Sigma B_{l-1}(A) v B_l(B) v Sigma B_{l-1}(B)
///     v  V_{i=1..l-1} B_{l-i}(A) * B_i(B)
///     v  V_{i=2..l-1} Sigma B_{l-i}(A) * B_{i-1}(B),
/// wedges whose lower index exceeds the upper index being absent.  The
/// l = 2 case is the Kunneth form B_2(A) v Sigma(A x B) v B_2(B); the two
/// routes agree because Sigma(X x Y) has the homology of X*Y v SX v SY.
inline BettiTable disjoint_union_barycenter(const BarycenterProvider& a,
                                            const BarycenterProvider& b, int l) {
    if (l < 2) throw std::domain_error("disjoint_union_barycenter: order must be >= 2");
    if (l > a.max_order() || l > b.max_order())
        throw data_error("disjoint_union_barycenter: a constituent cannot resolve order " +
                         std::to_string(l));
    if (l == 2) {
        auto cross = suspend(product_homology(a.table(1), b.table(1)), 1);
        return direct_sum(direct_sum(a.table(2), cross), b.table(2));
    }
    BettiTable acc = direct_sum(a.table(l), suspend(a.table(l - 1), 1));
    acc = direct_sum(acc, direct_sum(b.table(l), suspend(b.table(l - 1), 1)));
    for (int i = 1; i <= l - 1; ++i)
        acc = direct_sum(acc, join(a.table(l - i), b.table(i)));
    for (int i = 2; i <= l - 1; ++i)
        acc = direct_sum(acc, join(suspend(a.table(l - i), 1), b.table(i - 1)));
    return acc;
}

} // namespace qcurv
