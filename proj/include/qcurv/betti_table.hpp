#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>

#include "qcurv/errors.hpp"

namespace qcurv {

/// A finitely supported degree -> rank table of a graded Z2 vector space.
///
/// The same value type serves reduced and unreduced homology; the flag
/// records which convention the ranks follow.  Converting between the two
/// touches only degree 0.  A distinct empty-space sentinel represents the
/// convention B_0(Y) = {}, which is *not* the same thing as the zero
/// reduced table (that one is a point).  Tables are canonical: zero ranks
/// are never stored.
class BettiTable {
public:
    using rank_map = std::map<int, long long>;

    BettiTable() : reduced_(true) {}

    static BettiTable empty_space() {
        BettiTable t;
        t.empty_ = true;
        return t;
    }

    /// Zero reduced table: a contractible nonempty space.
    static BettiTable point() { return BettiTable{}; }

    static BettiTable reduced(rank_map ranks) { return BettiTable(std::move(ranks), true); }
    static BettiTable unreduced(rank_map ranks) { return BettiTable(std::move(ranks), false); }

    /// Reduced table of the sphere S^d (d >= 0; S^0 is {0:1}).
    static BettiTable sphere(int d) {
        if (d < 0) throw std::domain_error("sphere: negative dimension");
        return reduced({{d, 1}});
    }

    bool is_reduced() const { return reduced_; }
    bool is_empty_space() const { return empty_; }

    long long rank(int degree) const {
        auto it = ranks_.find(degree);
        return it == ranks_.end() ? 0 : it->second;
    }

    const rank_map& ranks() const { return ranks_; }

    long long total_rank() const {
        long long s = 0;
        for (auto& [d, r] : ranks_) s += r;
        return s;
    }

    /// Largest degree with nonzero rank, or -1 for the zero table / sentinel.
    int top_degree() const { return ranks_.empty() ? -1 : ranks_.rbegin()->first; }

    /// Alternating sum over the stored ranks (no reduced/unreduced offset).
    long long alternating_sum() const {
        long long s = 0;
        for (auto& [d, r] : ranks_) s += (d % 2 == 0) ? r : -r;
        return s;
    }

    BettiTable to_reduced() const {
        if (empty_) throw flag_error("to_reduced: empty-space sentinel has no unreduced form");
        if (reduced_) return *this;
        rank_map m = ranks_;
        long long r0 = rank(0);
        if (r0 < 1)
            throw flag_error("to_reduced: unreduced table of a nonempty space needs rank(0) >= 1");
        if (r0 == 1) m.erase(0); else m[0] = r0 - 1;
        return BettiTable(std::move(m), true);
    }

    BettiTable to_unreduced() const {
        if (empty_) throw flag_error("to_unreduced: empty-space sentinel has no unreduced form");
        if (!reduced_) return *this;
        rank_map m = ranks_;
        m[0] = rank(0) + 1;
        return BettiTable(std::move(m), false);
    }

    bool operator==(const BettiTable& o) const {
        return empty_ == o.empty_ && reduced_ == o.reduced_ && ranks_ == o.ranks_;
    }
    bool operator!=(const BettiTable& o) const { return !(*this == o); }

private:
    BettiTable(rank_map ranks, bool reduced) : reduced_(reduced) {
        for (auto& [d, r] : ranks) {
            if (d < 0) throw std::domain_error("BettiTable: negative degree");
            if (r < 0) throw std::domain_error("BettiTable: negative rank");
            if (r > 0) ranks_.emplace(d, r);
        }
    }

    rank_map ranks_;
    bool reduced_ = true;
    bool empty_ = false;
};

namespace detail {
inline void require_reduced(const BettiTable& t, const char* op) {
    if (!t.is_reduced())
        throw flag_error(std::string(op) + ": operand must be a reduced table");
}
inline void require_space(const BettiTable& t, const char* op) {
    if (t.is_empty_space())
        throw flag_error(std::string(op) + ": empty-space sentinel not accepted here");
}
} // namespace detail

/// Degreewise sum (wedge on the space level).  An empty-space operand acts
/// as the dropped term of a degenerate wedge and yields the other operand.
inline BettiTable direct_sum(const BettiTable& a, const BettiTable& b) {
    if (a.is_empty_space()) return b;
    if (b.is_empty_space()) return a;
    if (a.is_reduced() != b.is_reduced())
        throw flag_error("direct_sum: mismatched reduced flags");
    BettiTable::rank_map m = a.ranks();
    for (auto& [d, r] : b.ranks()) m[d] += r;
    return a.is_reduced() ? BettiTable::reduced(std::move(m))
                          : BettiTable::unreduced(std::move(m));
}

/// Graded tensor product over Z2: rank_out(d) = sum_{i+j=d} rank_a(i) rank_b(j).
inline BettiTable tensor(const BettiTable& a, const BettiTable& b) {
    detail::require_space(a, "tensor");
    detail::require_space(b, "tensor");
    detail::require_reduced(a, "tensor");
    detail::require_reduced(b, "tensor");
    BettiTable::rank_map m;
    for (auto& [i, ra] : a.ranks())
        for (auto& [j, rb] : b.ranks()) m[i + j] += ra * rb;
    return BettiTable::reduced(std::move(m));
}

/// Suspension operator sigma^times: shifts every degree up.  The empty
/// sentinel stays empty, so degenerate "sigma B_0" terms drop out of
/// assembled formulas.
inline BettiTable suspend(const BettiTable& a, int times = 1) {
    if (times < 0) throw std::domain_error("suspend: negative shift");
    if (a.is_empty_space()) return a;
    detail::require_reduced(a, "suspend");
    if (times == 0) return a;
    BettiTable::rank_map m;
    for (auto& [d, r] : a.ranks()) m[d + times] = r;
    return BettiTable::reduced(std::move(m));
}

/// Join: homologically sigma(a (x) b), with X * {} = X.
inline BettiTable join(const BettiTable& a, const BettiTable& b) {
    if (a.is_empty_space()) return b;
    if (b.is_empty_space()) return a;
    return suspend(tensor(a, b), 1);
}

/// Homology of the half smash X |x SigmaY: the join plus a suspended copy
/// of Y.  The empty sentinel has no half-smash convention on either side.
inline BettiTable half_smash_suspension(const BettiTable& x, const BettiTable& y) {
    detail::require_space(x, "half_smash_suspension");
    detail::require_space(y, "half_smash_suspension");
    return direct_sum(join(x, y), suspend(y, 1));
}

/// Kunneth over Z2: reduced homology of A x B.
inline BettiTable product_homology(const BettiTable& a, const BettiTable& b) {
    detail::require_space(a, "product_homology");
    detail::require_space(b, "product_homology");
    detail::require_reduced(a, "product_homology");
    detail::require_reduced(b, "product_homology");
    return direct_sum(direct_sum(a, b), tensor(a, b));
}

/// Homology of X/A for A contractible in X: H_*(X) + H_{*-1}(A).
/// Contractibility of A in the ambient space is the caller's responsibility.
inline BettiTable quotient_by_contractible_subspace(const BettiTable& x, const BettiTable& a) {
    detail::require_space(x, "quotient_by_contractible_subspace");
    detail::require_reduced(x, "quotient_by_contractible_subspace");
    if (a.is_empty_space()) return x;
    detail::require_reduced(a, "quotient_by_contractible_subspace");
    return direct_sum(x, suspend(a, 1));
}

/// Euler characteristic of the space the table stands for.  The empty
/// space has chi = 0; a reduced table of a nonempty space contributes an
/// extra +1 for the degree-0 class the reduced convention drops.
inline long long euler_characteristic(const BettiTable& t) {
    if (t.is_empty_space()) return 0;
    return t.alternating_sum() + (t.is_reduced() ? 1 : 0);
}

/// Polynomial with nonnegative integer coefficients indexed by degree.
/// Identical content to a Betti table; exists so that Morse and Poincare
/// polynomial arithmetic reads the way it is usually written.
class PoincarePolynomial {
public:
    using coeff_map = std::map<int, long long>;

    PoincarePolynomial() = default;
    explicit PoincarePolynomial(coeff_map c) {
        for (auto& [d, v] : c) {
            if (d < 0) throw std::domain_error("PoincarePolynomial: negative degree");
            if (v < 0) throw std::domain_error("PoincarePolynomial: negative coefficient");
            if (v != 0) coeffs_.emplace(d, v);
        }
    }

    static PoincarePolynomial from_table(const BettiTable& t) {
        detail::require_space(t, "PoincarePolynomial");
        coeff_map c(t.ranks().begin(), t.ranks().end());
        return PoincarePolynomial(std::move(c));
    }

    const coeff_map& coefficients() const { return coeffs_; }

    long long coefficient(int degree) const {
        auto it = coeffs_.find(degree);
        return it == coeffs_.end() ? 0 : it->second;
    }

    long long evaluate(long long t) const {
        long long s = 0;
        for (auto& [d, v] : coeffs_) {
            long long p = 1;
            for (int i = 0; i < d; ++i) p *= t;
            s += v * p;
        }
        return s;
    }

    /// Alternating coefficient sum; for a Morse polynomial this is the
    /// Poincare-Hopf index sum.
    long long at_minus_one() const { return evaluate(-1); }

    bool operator==(const PoincarePolynomial& o) const { return coeffs_ == o.coeffs_; }

private:
    coeff_map coeffs_;
};

} // namespace qcurv
