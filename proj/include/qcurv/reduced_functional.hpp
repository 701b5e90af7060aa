#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qcurv/manifold_model.hpp"

namespace qcurv {

/// A tuple of p interior and q boundary points, the argument of F_{p,q}.
/// Interior points carry weight two toward the total mass 2p + q = k.
struct Configuration {
    std::vector<Point> interior;
    std::vector<BoundaryPoint> boundary;

    int p() const { return (int)interior.size(); }
    int q() const { return (int)boundary.size(); }
    int k() const { return 2 * p() + q(); }

    /// Point i in the combined indexing 0..p+q-1, embedded in the slab.
    Point at(int i) const {
        return i < p() ? interior[i] : embed_boundary(boundary[i - p()]);
    }
};

namespace detail {
inline void require_distinct(const Configuration& cfg) {
    int n = cfg.p() + cfg.q();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((cfg.at(i) - cfg.at(j)).norm() == 0)
                throw std::domain_error("configuration: coincident points");
}
} // namespace detail

/// Separation requirements of the search domain: pairwise distance at
/// least the eta floor, interior points at least rho_floor off the
/// boundary, everything inside the box.
inline void validate_configuration(const SlabModel& model, const Configuration& cfg) {
    for (const auto& a : cfg.interior) {
        if (!model.in_box(a)) throw std::domain_error("configuration: interior point off box");
        if (SlabModel::boundary_distance(a) < model.rho_floor())
            throw std::domain_error("configuration: interior point below the rho floor");
    }
    for (const auto& b : cfg.boundary)
        if (!model.in_box(embed_boundary(b)))
            throw std::domain_error("configuration: boundary point off box");
    int n = cfg.p() + cfg.q();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((cfg.at(i) - cfg.at(j)).norm() < model.eta_floor())
                throw std::domain_error("configuration: pairwise separation below the eta floor");
}

/// F_p^M: sum of H(a_i, a_i) + sum_{j != i} G(a_i, a_j) + (1/2) ln K(a_i)
/// over interior points.
inline double f_interior(const SlabModel& model, const std::vector<Point>& pts) {
    double s = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        double t = model.regular_part(pts[i], pts[i]) + 0.5 * std::log(model.k_value(pts[i]));
        for (size_t j = 0; j < pts.size(); ++j)
            if (j != i) t += model.green(pts[i], pts[j]);
        s += t;
    }
    return s;
}

/// F_q^dM: as f_interior over boundary points, with ln K unhalved.
inline double f_boundary(const SlabModel& model, const std::vector<BoundaryPoint>& pts) {
    double s = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        Point a = embed_boundary(pts[i]);
        double t = model.regular_part(a, a) + std::log(model.k_value(a));
        for (size_t j = 0; j < pts.size(); ++j)
            if (j != i) t += model.green(a, embed_boundary(pts[j]));
        s += t;
    }
    return s;
}

namespace detail {
inline double cross_green(const SlabModel& model, const Configuration& cfg) {
    double s = 0;
    for (const auto& a : cfg.interior)
        for (const auto& b : cfg.boundary) s += model.green(a, embed_boundary(b));
    return s;
}
} // namespace detail

/// F_{p,q}^M = F_p^M + (1/2) sum_int sum_bdry G.
inline double f_pq_m(const SlabModel& model, const Configuration& cfg) {
    detail::require_distinct(cfg);
    return f_interior(model, cfg.interior) + 0.5 * detail::cross_green(model, cfg);
}

/// F_{p,q}^dM = F_q^dM + 2 sum_int sum_bdry G.
inline double f_pq_dm(const SlabModel& model, const Configuration& cfg) {
    detail::require_distinct(cfg);
    return f_boundary(model, cfg.boundary) + 2.0 * detail::cross_green(model, cfg);
}

/// The reduced functional F_{p,q} = 2 F_{p,q}^M + (1/2) F_{p,q}^dM.  Both
/// routes of the defining identity are evaluated and cross-checked to
/// 1e-12 relative; the second route is 2 F_p^M + (1/2) F_q^dM + 2 sum G.
inline double f_pq(const SlabModel& model, const Configuration& cfg) {
    detail::require_distinct(cfg);
    double route1 = 2.0 * f_pq_m(model, cfg) + 0.5 * f_pq_dm(model, cfg);
    double route2 = 2.0 * f_interior(model, cfg.interior) +
                    0.5 * f_boundary(model, cfg.boundary) +
                    2.0 * detail::cross_green(model, cfg);
    double scale = std::max({1.0, std::abs(route1), std::abs(route2)});
    if (std::abs(route1 - route2) > 1e-12 * scale)
        throw std::logic_error("f_pq: the two defining routes disagree");
    return route2;
}

namespace detail {

/// Exponent of the partial functional F_i^A at x, together with its
/// gradient in x.  Interior i:
///   H(a_i, x) + sum_{j<=p, j!=i} G(a_j, x) + (1/4) ln K(x)
///   + (1/2) sum_{j>p} G(a_j, x);
/// boundary i: half the H and same-side G terms, full cross terms.
struct Exponent {
    double value;
    Eigen::Vector4d grad;
};

inline Exponent partial_exponent(const SlabModel& model, const Configuration& cfg, int i,
                                 const Point& x, bool want_grad) {
    const int p = cfg.p(), n = cfg.p() + cfg.q();
    if (i < 0 || i >= n) throw std::domain_error("partial functional: index out of range");
    const bool interior = i < p;
    const Point ai = cfg.at(i);

    Exponent e{0.0, Eigen::Vector4d::Zero()};
    const double self_w = interior ? 1.0 : 0.5;
    e.value += self_w * model.regular_part(ai, x);
    if (want_grad) e.grad += self_w * model.regular_part_grad_second(ai, x);

    // in both branches interior sources enter with weight 1 and boundary
    // sources with weight 1/2
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double w = j < p ? 1.0 : 0.5;
        e.value += w * model.green(cfg.at(j), x);
        if (want_grad) e.grad += w * model.green_grad_second(cfg.at(j), x);
    }

    e.value += 0.25 * std::log(model.k_value(x));
    if (want_grad) e.grad += 0.25 * model.grad_ln_k(x);
    return e;
}

} // namespace detail

/// The partial functional F_i^A evaluated at x (strictly positive).
inline double partial_f_at(const SlabModel& model, const Configuration& cfg, int i,
                           const Point& x) {
    return std::exp(4.0 * detail::partial_exponent(model, cfg, i, x, false).value);
}

/// F_i^A at its own point a_i.
inline double partial_f(const SlabModel& model, const Configuration& cfg, int i) {
    return partial_f_at(model, cfg, i, cfg.at(i));
}

/// Per-point gradient of F_{p,q}: interior components are the full chart
/// gradients grad F_i^A / F_i^A, boundary components the tangential
/// gradients with the extra 1/2.
struct ConfigGradient {
    std::vector<Eigen::Vector4d> interior;
    std::vector<Eigen::Vector3d> boundary;

    double squared_norm() const {
        double s = 0;
        for (const auto& g : interior) s += g.squaredNorm();
        for (const auto& g : boundary) s += g.squaredNorm();
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }
};

inline ConfigGradient grad_f_pq(const SlabModel& model, const Configuration& cfg) {
    detail::require_distinct(cfg);
    ConfigGradient g;
    const int p = cfg.p(), n = cfg.p() + cfg.q();
    for (int i = 0; i < n; ++i) {
        auto e = detail::partial_exponent(model, cfg, i, cfg.at(i), true);
        if (i < p) {
            g.interior.push_back(4.0 * e.grad); // grad F_i / F_i
        } else {
            Eigen::Vector4d full = 4.0 * e.grad;
            g.boundary.push_back(0.5 * full.head<3>()); // tangential, halved
        }
    }
    return g;
}

struct LkResult {
    double value = 0;
    int sign = 0;           // sign at the configured floor; 0 means |value| below it
    bool q0_caveat = false; // q = 0 formula only equals L_K at critical points
};

/// L_K(A).  For q != 0 this is sum over boundary points of
/// (F_i^A)^{1/4}(a_i) d(ln K)/dn(a_i).  For q = 0 the quarter of l_K(A) is
/// reported, with the Laplacian of F_i^A taken by central finite
/// differences in the chart; away from critical points that identity is
/// only formal, hence the caveat flag.
inline LkResult lk(const SlabModel& model, const Configuration& cfg, double lk_floor = 1e-10,
                   double fd_step = 1e-4) {
    detail::require_distinct(cfg);
    LkResult r;
    const int p = cfg.p();
    if (cfg.q() != 0) {
        for (int i = 0; i < cfg.q(); ++i) {
            double f = partial_f(model, cfg, p + i);
            r.value += std::pow(f, 0.25) * model.dln_k_dn(cfg.boundary[i]);
        }
    } else {
        for (int i = 0; i < p; ++i) {
            const Point a = cfg.interior[i];
            double f0 = partial_f(model, cfg, i);
            double lap = 0;
            for (int d = 0; d < 4; ++d) {
                Point xp = a, xm = a;
                xp[d] += fd_step;
                xm[d] -= fd_step;
                lap += (partial_f_at(model, cfg, i, xp) - 2 * f0 +
                        partial_f_at(model, cfg, i, xm)) /
                       (fd_step * fd_step);
            }
            double sq = std::sqrt(f0);
            r.value += lap / sq - (2.0 / 3.0) * SlabModel::scalar_curvature(a) * sq;
        }
        r.value *= 0.25;
        r.q0_caveat = grad_f_pq(model, cfg).norm() > 1e-6;
    }
    r.sign = std::abs(r.value) < lk_floor ? 0 : (r.value > 0 ? 1 : -1);
    return r;
}

/// Level of a critical point at infinity with total mass k and reduced
/// functional value f:  -(20/3) k pi^2 - 4 k pi^2 ln(k pi^2 / 6) - 8 pi^2 f.
inline double energy_at_infinity(double f_value, int k) {
    if (k < 1) throw std::domain_error("energy_at_infinity: k must be >= 1");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return -(20.0 / 3.0) * k * pi2 - 4.0 * k * pi2 * std::log(k * pi2 / 6.0) -
           8.0 * pi2 * f_value;
}

} // namespace qcurv
