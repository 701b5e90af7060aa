#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcurv/betti_table.hpp"
#include "qcurv/errors.hpp"

namespace qcurv {

/// One classified critical point of a reduced functional F_{p,q}, as the
/// certifier consumes it.  Only points with lk_sign = -1 are critical
/// points at infinity; +1 points are carried for reporting, 0 violates
/// nondegeneracy.
struct CritRecord {
    int p = 0;
    int q = 0;
    int i_inf = 0;
    int lk_sign = 0;
};

struct CritSummary {
    int k = 1;
    int kbar = 0;
    long long chi_M = 0;
    std::vector<CritRecord> points;

    void validate() const {
        if (k < 1) throw data_error("CritSummary: k must be >= 1");
        if (kbar < 0) throw data_error("CritSummary: kbar must be >= 0");
        for (const auto& r : points) {
            if (r.p < 0 || r.q < 0 || 2 * r.p + r.q != k)
                throw data_error("CritSummary: record with 2p + q != k");
            if (r.lk_sign == 0)
                throw nd_violation("CritSummary: record with vanishing L_K breaks (ND)");
            if (r.lk_sign != -1 && r.lk_sign != 1)
                throw data_error("CritSummary: lk_sign must be -1 or +1");
            int lo = r.p + r.q - 1, hi = 5 * r.p + 4 * r.q - 1;
            if (r.i_inf < lo || r.i_inf > hi)
                throw data_error("CritSummary: i_inf outside [p+q-1, 5p+4q-1]");
        }
    }
};

/// Morse counts m_i, i = 0..4k-1 (longer when indices were shifted by kbar).
struct MorseCounts {
    std::vector<long long> m;

    PoincarePolynomial polynomial() const {
        PoincarePolynomial::coeff_map c;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) c[(int)i] = m[i];
        return PoincarePolynomial(std::move(c));
    }
};

/// Morse index at infinity of the full functional: the reduced index plus
/// the number of negative eigenvalues.
inline int index_shift(int i_inf, int kbar) {
    if (kbar < 0) throw std::domain_error("index_shift: kbar must be >= 0");
    return i_inf + kbar;
}

/// Tally the critical points at infinity: m_i counts lk_sign = -1 records
/// with i_inf = i.  Records with positive L_K are ignored.
inline MorseCounts assemble_counts(const CritSummary& s) {
    s.validate();
    MorseCounts counts;
    counts.m.assign(4 * s.k, 0);
    for (const auto& r : s.points)
        if (r.lk_sign == -1) counts.m[r.i_inf] += 1;
    return counts;
}

/// Counts re-indexed by the kbar shift; sized 4k + kbar.
inline MorseCounts shifted_counts(const CritSummary& s) {
    s.validate();
    MorseCounts counts;
    counts.m.assign(4 * s.k + s.kbar, 0);
    for (const auto& r : s.points)
        if (r.lk_sign == -1) counts.m[index_shift(r.i_inf, s.kbar)] += 1;
    return counts;
}

/// Outcome of the Morse-inequality feasibility system.  The chain forces
/// every n_i, so the solution is unique when it exists; `n` holds the
/// forced values (possibly negative when infeasible) and
/// `first_violation` the index of the first failing constraint.
struct FeasibilityVerdict {
    bool feasible = false;
    std::vector<long long> n;
    int first_violation = -1;
    std::string violation;
    bool c_tail_diagnostic = false;
};

namespace detail {

/// Forced-chain solve of  m_i = p_i + n_i + n_{i-1}  with n_{-1} = 0,
/// requiring n_i >= 0 throughout and n_{N-1} = 0.
inline FeasibilityVerdict solve_chain(const std::vector<long long>& m,
                                      const std::vector<long long>& p) {
    FeasibilityVerdict v;
    const int N = (int)m.size();
    v.n.assign(N, 0);
    long long prev = 0;
    for (int i = 0; i < N; ++i) {
        long long pi = i < (int)p.size() ? p[i] : 0;
        v.n[i] = m[i] - pi - prev;
        prev = v.n[i];
        if (v.n[i] < 0 && v.first_violation < 0) {
            v.first_violation = i;
            v.violation = "n_" + std::to_string(i) + " forced negative";
        }
    }
    if (v.first_violation < 0 && v.n[N - 1] != 0) {
        v.first_violation = N - 1;
        v.violation = "terminal constraint n_" + std::to_string(N - 1) + " = 0 fails";
    }
    v.feasible = v.first_violation < 0;
    return v;
}

} // namespace detail

/// Feasibility of the critical-case system (k = 1):
///   m_0 = 1 + n_0,  m_i = n_i + n_{i-1} (i = 1..3),  0 = n_4,
/// with n_4 determined by the chain.  No solutions certifies existence.
inline FeasibilityVerdict check_system_k1(const MorseCounts& counts) {
    if (counts.m.size() != 4) throw data_error("check_system_k1: counts must have length 4");
    return detail::solve_chain(counts.m, {1});
}

/// Feasibility of the supercritical system (k >= 2):
///   m_0 = n_0,  m_1 = n_0 + n_1,
///   m_i = c_{i-1} + n_i + n_{i-1}   (i = 2..4k-4),
///   m_i = n_i + n_{i-1}             (i = 4k-3..4k-1),  0 = n_{4k-1}.
/// `c` holds unreduced Betti numbers of the order-(k-1) boundary-weighted
/// barycenter space; indices 1..4k-5 are consumed.  A diagnostic flags the
/// known index-range discrepancy whenever the reading that stops the c
/// terms one equation earlier would flip the verdict.
inline FeasibilityVerdict check_system_k(const MorseCounts& counts,
                                         const std::vector<long long>& c, int k) {
    if (k < 2) throw std::domain_error("check_system_k: requires k >= 2");
    if ((int)counts.m.size() != 4 * k)
        throw data_error("check_system_k: counts must have length 4k");
    if ((int)c.size() < 4 * k - 4)
        throw data_error("check_system_k: c array must cover degrees 0..4k-5");
    for (size_t i = 4 * k - 4; i < c.size(); ++i)
        if (c[i] != 0)
            throw data_error("check_system_k: c has support beyond the homological dimension");

    std::vector<long long> p(4 * k, 0);
    for (int i = 2; i <= 4 * k - 4; ++i) p[i] = c[i - 1];
    auto verdict = detail::solve_chain(counts.m, p);

    if (c[4 * k - 5] != 0) {
        auto alt = p;
        alt[4 * k - 4] = 0;
        if (detail::solve_chain(counts.m, alt).feasible != verdict.feasible)
            verdict.c_tail_diagnostic = true;
    }
    return verdict;
}

/// Generalized chain for kbar-shifted counts with a user-adjusted c array:
/// the sublevel topology enters as p_i = c_{i-1} for i >= 2 (plus the
/// empty-sublevel constant when k = 1 and kbar = 0).
inline FeasibilityVerdict check_system_shifted(const MorseCounts& counts,
                                               const std::vector<long long>& c, int k,
                                               int kbar) {
    if (k < 1 || kbar < 0) throw std::domain_error("check_system_shifted: bad k or kbar");
    if ((int)counts.m.size() != 4 * k + kbar)
        throw data_error("check_system_shifted: counts must have length 4k + kbar");
    std::vector<long long> p(counts.m.size(), 0);
    if (k == 1 && kbar == 0) p[0] = 1;
    for (size_t i = 2; i < p.size(); ++i)
        if (i - 1 < c.size()) p[i] = c[i - 1];
    return detail::solve_chain(counts.m, p);
}

/// Poincare-Hopf index sum over the critical points at infinity.
inline long long hopf_sum(const CritSummary& s) {
    s.validate();
    long long sum = 0;
    for (const auto& r : s.points)
        if (r.lk_sign == -1) sum += (r.i_inf % 2 == 0) ? 1 : -1;
    return sum;
}

struct HopfVerdict {
    long long sum = 0;
    long long target = 0;
    bool certified = false;
};

/// Existence is certified when the index sum misses its topological
/// target: 1 for k = 1, otherwise 1 - chi of the order-(k-1)
/// boundary-weighted barycenter space.
inline HopfVerdict hopf_criterion(const CritSummary& s, long long chi_target) {
    HopfVerdict v;
    v.sum = hopf_sum(s);
    v.target = chi_target;
    v.certified = v.sum != v.target;
    return v;
}

struct JumpVerdict {
    int l = 0;
    bool certified = false;
    bool index_gap = false;       // no point at infinity with i_inf = l
    bool partial_sum_misses = false;
    bool witness_exists = false;  // the criterion's existence clause
    long long partial_sum = 0;
};

/// Jump criterion at level l: certified when no point at infinity has
/// index l, the index sum truncated below l misses the target, and the
/// criterion's existence clause holds (for k >= 2 a point with index
/// <= l-1; for k = 1 any point at infinity).
inline JumpVerdict jump_criterion(const CritSummary& s, int l, long long chi_target) {
    s.validate();
    if (l < 1 || l > 4 * s.k - 1)
        throw std::domain_error("jump_criterion: l must lie in [1, 4k-1]");
    JumpVerdict v;
    v.l = l;
    v.index_gap = true;
    bool any_member = false;
    bool below = false;
    for (const auto& r : s.points) {
        if (r.lk_sign != -1) continue;
        any_member = true;
        if (r.i_inf == l) v.index_gap = false;
        if (r.i_inf <= l - 1) {
            below = true;
            v.partial_sum += (r.i_inf % 2 == 0) ? 1 : -1;
        }
    }
    v.partial_sum_misses = v.partial_sum != chi_target;
    v.witness_exists = s.k >= 2 ? below : any_member;
    v.certified = v.index_gap && v.partial_sum_misses && v.witness_exists;
    return v;
}

/// Full certification report over one summary.
struct CertifyReport {
    enum class Verdict { existence_certified, inconclusive };

    int k = 1;
    int kbar = 0;
    MorseCounts counts;
    std::vector<long long> c;
    FeasibilityVerdict system;
    HopfVerdict hopf;
    std::vector<JumpVerdict> jumps;
    bool kbar_warning = false;
    Verdict verdict = Verdict::inconclusive;

    bool certified() const { return verdict == Verdict::existence_certified; }
};

/// Hopf target from an unreduced c array: 1 - chi of the sublevel it
/// describes; the empty array stands for the empty sublevel (k = 1).
inline long long hopf_target_from_c(const std::vector<long long>& c) {
    long long chi = 0;
    for (size_t n = 0; n < c.size(); ++n) chi += (n % 2 == 0) ? c[n] : -c[n];
    return 1 - chi;
}

/// Run the feasibility system, the Hopf criterion, and every admissible
/// jump level; existence is certified if any of them fires.  For kbar > 0
/// all indices are shifted before entering the system and the caller must
/// have supplied the adjusted c array (the kbar_warning flag reminds the
/// reader that this artifact does not compute that topology).
inline CertifyReport certify(const CritSummary& s, const std::vector<long long>& c) {
    s.validate();
    CertifyReport rep;
    rep.k = s.k;
    rep.kbar = s.kbar;
    rep.c = c;
    rep.kbar_warning = s.kbar > 0;

    if (s.kbar > 0) {
        rep.counts = shifted_counts(s);
        rep.system = check_system_shifted(rep.counts, c, s.k, s.kbar);
    } else {
        rep.counts = assemble_counts(s);
        rep.system = s.k == 1 ? check_system_k1(rep.counts) : check_system_k(rep.counts, c, s.k);
    }

    long long target = hopf_target_from_c(c);
    rep.hopf = hopf_criterion(s, target);
    for (int l = 1; l <= 4 * s.k - 1; ++l) rep.jumps.push_back(jump_criterion(s, l, target));

    bool fired = !rep.system.feasible || rep.hopf.certified;
    for (const auto& j : rep.jumps) fired = fired || j.certified;
    rep.verdict = fired ? CertifyReport::Verdict::existence_certified
                        : CertifyReport::Verdict::inconclusive;
    return rep;
}

} // namespace qcurv
