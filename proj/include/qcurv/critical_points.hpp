#pragma once

#include <algorithm>
#include <future>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "qcurv/reduced_functional.hpp"

namespace qcurv {

struct SearchConfig {
    int starts = 48;
    unsigned seed = 1;
    int descent_iters = 120;
    int max_newton = 50;
    double grad_tol = 1e-9;
    double fd_hess_step = 1e-4;
    double dedup_radius = 1e-3;
    double nd_floor = 1e-8;
    double lk_floor = 1e-10;
    int threads = 0; // 0 = hardware concurrency
};

/// A classified critical point of F_{p,q}.
struct CritPointAtInfinity {
    Configuration config;
    double f_value = 0;
    double grad_norm = 0;
    int morse_index = 0;
    int i_inf = 0;
    double lk_value = 0;
    int lk_sign = 0;
    double energy = 0;
    bool nd_ok = true;
    bool lk_q0_caveat = false;
};

struct SearchReport {
    std::vector<CritPointAtInfinity> points;
    int converged_starts = 0;
    bool degenerate_warning = false;
    std::string diagnostic;
};

namespace detail {

inline int dim_of(int p, int q) { return 4 * p + 3 * q; }

inline Eigen::VectorXd pack(const Configuration& cfg) {
    Eigen::VectorXd z(dim_of(cfg.p(), cfg.q()));
    int at = 0;
    for (const auto& a : cfg.interior)
        for (int d = 0; d < 4; ++d) z[at++] = a[d];
    for (const auto& b : cfg.boundary)
        for (int d = 0; d < 3; ++d) z[at++] = b[d];
    return z;
}

inline Configuration unpack(const Eigen::VectorXd& z, int p, int q) {
    Configuration cfg;
    int at = 0;
    for (int i = 0; i < p; ++i) {
        Point a;
        for (int d = 0; d < 4; ++d) a[d] = z[at++];
        cfg.interior.push_back(a);
    }
    for (int i = 0; i < q; ++i) {
        BoundaryPoint b;
        for (int d = 0; d < 3; ++d) b[d] = z[at++];
        cfg.boundary.push_back(b);
    }
    return cfg;
}

inline void clamp_into_box(const SlabModel& model, Eigen::VectorXd& z, int p, int q) {
    const auto& lo = model.spec().box_lo;
    const auto& hi = model.spec().box_hi;
    int at = 0;
    for (int i = 0; i < p; ++i)
        for (int d = 0; d < 4; ++d, ++at) {
            double l = d == 3 ? model.rho_floor() : lo[d];
            z[at] = std::clamp(z[at], l, hi[d]);
        }
    for (int i = 0; i < q; ++i)
        for (int d = 0; d < 3; ++d, ++at) z[at] = std::clamp(z[at], lo[d], hi[d]);
}

inline Eigen::VectorXd flat_gradient(const SlabModel& model, const Eigen::VectorXd& z, int p,
                                     int q) {
    auto g = grad_f_pq(model, unpack(z, p, q));
    Eigen::VectorXd out(z.size());
    int at = 0;
    for (const auto& gi : g.interior)
        for (int d = 0; d < 4; ++d) out[at++] = gi[d];
    for (const auto& gi : g.boundary)
        for (int d = 0; d < 3; ++d) out[at++] = gi[d];
    return out;
}

/// Symmetric finite-difference Hessian from central differences of the
/// analytic gradient.
inline Eigen::MatrixXd fd_hessian(const SlabModel& model, const Eigen::VectorXd& z, int p,
                                  int q, double h) {
    const int n = (int)z.size();
    Eigen::MatrixXd H(n, n);
    Eigen::VectorXd zp = z, zm = z;
    for (int d = 0; d < n; ++d) {
        zp[d] = z[d] + h;
        zm[d] = z[d] - h;
        H.col(d) = (flat_gradient(model, zp, p, q) - flat_gradient(model, zm, p, q)) / (2 * h);
        zp[d] = z[d];
        zm[d] = z[d];
    }
    return 0.5 * (H + H.transpose());
}

inline bool separations_ok(const SlabModel& model, const Configuration& cfg) {
    try {
        validate_configuration(model, cfg);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

inline std::optional<Configuration> sample_start(std::mt19937_64& rng, const SlabModel& model,
                                                 int p, int q) {
    const auto& lo = model.spec().box_lo;
    const auto& hi = model.spec().box_hi;
    for (int attempt = 0; attempt < 300; ++attempt) {
        Configuration cfg;
        for (int i = 0; i < p; ++i) {
            Point a;
            for (int d = 0; d < 3; ++d)
                a[d] = std::uniform_real_distribution<double>(lo[d], hi[d])(rng);
            a[3] = std::uniform_real_distribution<double>(model.rho_floor(), hi[3])(rng);
            cfg.interior.push_back(a);
        }
        for (int i = 0; i < q; ++i) {
            BoundaryPoint b;
            for (int d = 0; d < 3; ++d)
                b[d] = std::uniform_real_distribution<double>(lo[d], hi[d])(rng);
            cfg.boundary.push_back(b);
        }
        if (separations_ok(model, cfg)) return cfg;
    }
    return std::nullopt;
}

/// One start: Levenberg-Marquardt on the residual r = grad F, opened in
/// the Newton regime.  Rejected steps escalate lambda into gradient
/// descent on |grad F|^2; accepted ones anneal it back toward Newton, so
/// starts inside a Newton basin refine quadratically while starts on the
/// flat far field stall and are dropped instead of drifting to the box
/// corners.
inline std::optional<Eigen::VectorXd> run_start(const SlabModel& model, int p, int q,
                                                const SearchConfig& sc, std::mt19937_64& rng) {
    auto start = sample_start(rng, model, p, q);
    if (!start) return std::nullopt;
    Eigen::VectorXd z = pack(*start);

    auto residual = [&](const Eigen::VectorXd& y) { return flat_gradient(model, y, p, q); };

    double lambda = 1e-6;
    Eigen::VectorXd r;
    try {
        r = residual(z);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    const int iters = sc.descent_iters + sc.max_newton;
    const int n = (int)z.size();
    for (int it = 0; it < iters; ++it) {
        if (r.norm() <= sc.grad_tol) return z;
        Eigen::MatrixXd H = fd_hessian(model, z, p, q, sc.fd_hess_step);
        bool accepted = false;
        for (int tries = 0; tries < 16; ++tries) {
            Eigen::MatrixXd A = H * H + lambda * Eigen::MatrixXd::Identity(n, n);
            Eigen::VectorXd delta = A.ldlt().solve(-H * r);
            if (!delta.allFinite()) {
                lambda = std::min(lambda * 8, 1e10);
                continue;
            }
            Eigen::VectorXd zn = z + delta;
            clamp_into_box(model, zn, p, q);
            Eigen::VectorXd rn;
            try {
                rn = residual(zn);
            } catch (const std::domain_error&) {
                lambda = std::min(lambda * 8, 1e10);
                continue;
            }
            if (rn.norm() < r.norm()) {
                z = zn;
                r = rn;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                break;
            }
            lambda = std::min(lambda * 8, 1e10);
        }
        if (!accepted) return std::nullopt;
    }
    return r.norm() <= sc.grad_tol ? std::optional<Eigen::VectorXd>(z) : std::nullopt;
}

/// Distance between configurations: points are unordered within each
/// group, so match over permutations (groups are small).
inline double config_distance(const Configuration& a, const Configuration& b) {
    if (a.p() != b.p() || a.q() != b.q()) return 1e300;
    auto group_dist = [](auto pts_a, auto pts_b) {
        const int n = (int)pts_a.size();
        if (n == 0) return 0.0;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = 1e300;
        do {
            double worst = 0;
            for (int i = 0; i < n; ++i)
                worst = std::max(worst, (pts_a[i] - pts_b[perm[i]]).norm());
            best = std::min(best, worst);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    };
    return std::max(group_dist(a.interior, b.interior), group_dist(a.boundary, b.boundary));
}

} // namespace detail

/// Multi-start search for the critical points of F_{p,q}: gradient descent
/// on |grad F|^2 followed by Newton refinement, deduplication, and Morse
/// classification of each survivor.  Deterministic given the seed: every
/// start derives its own generator, so scheduling cannot reorder results.
inline SearchReport find_critical_points(const SlabModel& model, int p, int q,
                                         const SearchConfig& sc = {}) {
    if (p < 0 || q < 0 || p + q == 0)
        throw std::domain_error("find_critical_points: need p, q >= 0 with p + q > 0");
    SearchReport report;

    std::vector<std::optional<Eigen::VectorXd>> hits((size_t)sc.starts);
    int nthreads = sc.threads > 0 ? sc.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= sc.starts) return;
            std::mt19937_64 rng(sc.seed ^ (0x9e3779b97f4a7c15ULL * (unsigned long long)(i + 1)));
            hits[(size_t)i] = detail::run_start(model, p, q, sc, rng);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::vector<Configuration> kept;
    for (const auto& h : hits) {
        if (!h) continue;
        ++report.converged_starts;
        Configuration cfg = detail::unpack(*h, p, q);
        if (!detail::separations_ok(model, cfg)) continue;
        bool dup = false;
        for (const auto& other : kept)
            if (detail::config_distance(cfg, other) < sc.dedup_radius) {
                dup = true;
                break;
            }
        if (!dup) kept.push_back(std::move(cfg));
    }

    for (auto& cfg : kept) {
        Eigen::VectorXd z = detail::pack(cfg);
        Eigen::MatrixXd H = detail::fd_hessian(model, z, p, q, sc.fd_hess_step);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
        const auto& ev = eig.eigenvalues();
        double min_abs = ev.cwiseAbs().minCoeff();
        if (min_abs < sc.nd_floor) {
            report.degenerate_warning = true;
            continue; // excluded, (ND) fails here
        }
        CritPointAtInfinity pt;
        pt.config = cfg;
        pt.f_value = f_pq(model, cfg);
        pt.grad_norm = detail::flat_gradient(model, z, p, q).norm();
        pt.morse_index = (int)(ev.array() < 0).count();
        pt.i_inf = 5 * p + 4 * q - 1 - pt.morse_index;
        auto l = lk(model, cfg, sc.lk_floor, sc.fd_hess_step);
        pt.lk_value = l.value;
        pt.lk_sign = l.sign;
        pt.lk_q0_caveat = l.q0_caveat;
        pt.nd_ok = l.sign != 0;
        pt.energy = energy_at_infinity(pt.f_value, 2 * p + q);
        report.points.push_back(std::move(pt));
    }

    if (report.points.empty()) {
        report.diagnostic = report.degenerate_warning
                                ? "only degenerate points found"
                                : (report.converged_starts == 0 ? "no start converged"
                                                                : "no admissible point survived");
    }
    return report;
}

/// (ND)_{p,q} over a batch of found points: every Hessian nondegenerate
/// (degenerates never make it into the list) and every |L_K| above the
/// floor.  Vacuously true on the empty list.
inline bool nd_check(const std::vector<CritPointAtInfinity>& points) {
    for (const auto& pt : points)
        if (!pt.nd_ok || pt.lk_sign == 0) return false;
    return true;
}

} // namespace qcurv
