#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "qcurv/reduced_functional.hpp"

namespace qcurv {

/// The standard bubble profile: center b in 4-space (on the boundary
/// hyperplane for boundary bubbles) and concentration scale lambda > 0.
struct Bubble {
    Point center = Point::Zero();
    double lambda = 1.0;
};

/// delta_{b,lambda}(y) = ln(2 lambda / (1 + lambda^2 |y - b|^2)).
inline double eval_bubble(const Bubble& b, const Point& y) {
    if (b.lambda <= 0) throw std::domain_error("eval_bubble: lambda must be positive");
    double r2 = (y - b.center).squaredNorm();
    return std::log(2 * b.lambda) - std::log1p(b.lambda * b.lambda * r2);
}

/// Analytic normal derivative d/dx4; vanishes identically on the boundary
/// hyperplane when the center sits there (even dependence on x4).
inline double bubble_normal_deriv(const Bubble& b, const Point& y) {
    double r2 = (y - b.center).squaredNorm();
    return -2 * b.lambda * b.lambda * (y[3] - b.center[3]) /
           (1 + b.lambda * b.lambda * r2);
}

namespace detail {

/// 9-point second-order Laplacian in 4-d.
template <class F>
double fd_laplacian(F&& f, const Point& x, double h) {
    double center = f(x);
    double acc = 0;
    for (int d = 0; d < 4; ++d) {
        Point xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        acc += f(xp) + f(xm) - 2 * center;
    }
    return acc / (h * h);
}

} // namespace detail

/// Composed-stencil biharmonic: the 9-point Laplacian applied twice, the
/// 4-d analogue of the classical 13-point stencil.
inline double fd_bilaplacian_bubble(const Bubble& b, const Point& x, double h) {
    auto lap = [&](const Point& y) {
        return detail::fd_laplacian([&](const Point& z) { return eval_bubble(b, z); }, y, h);
    };
    return detail::fd_laplacian(lap, x, h);
}

/// Max over a sample lattice of |Delta_h^2 delta - 6 e^{4 delta}|.  The
/// lattice is inset by the 2h reach of the composed stencil; a step too
/// large for the box is a domain error.
inline double bubble_pde_residual(const Bubble& b, double h, double box_half = 0.3,
                                  int samples_per_dim = 5) {
    if (h <= 0) throw std::domain_error("bubble_pde_residual: step must be positive");
    if (samples_per_dim < 2) throw std::domain_error("bubble_pde_residual: need >= 2 samples");
    double inner = box_half - 2 * h;
    if (inner <= 0)
        throw std::domain_error("bubble_pde_residual: stencil does not fit the sample box");

    double worst = 0;
    const int n = samples_per_dim;
    std::vector<double> offs(n);
    for (int i = 0; i < n; ++i) offs[i] = -inner + 2 * inner * i / (n - 1);
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    Point x = b.center + Point(offs[i0], offs[i1], offs[i2], offs[i3]);
                    double lhs = fd_bilaplacian_bubble(b, x, h);
                    double rhs = 6 * std::exp(4 * eval_bubble(b, x));
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
    return worst;
}

/// Truncated bubble ln(2 lambda / (1 + lambda^2 chi_rho(d(x,a))^2)).
/// Inside the cutoff radius chi is the identity and the squared distance
/// is used directly, so the truncation equals the bubble bit for bit.
inline double truncated_bubble(const SlabModel& model, const Point& a, double lambda,
                               const Point& x) {
    if (lambda <= 0) throw std::domain_error("truncated_bubble: lambda must be positive");
    double r2 = (x - a).squaredNorm();
    double d = std::sqrt(r2);
    double c2 = d <= model.rho() ? r2 : [&] { double c = model.chi_rho(d); return c * c; }();
    return std::log(2 * lambda) - std::log1p(lambda * lambda * c2);
}

namespace detail {

inline void require_lambda(double lambda, double floor) {
    if (lambda < floor)
        throw std::domain_error("expansion: lambda below the validity floor");
}

/// Laplacian of the expansion regular part in its second slot.
inline double lap_expansion_h(const SlabModel& m, const Point& a, const Point& x,
                              double h = 1e-3) {
    return fd_laplacian([&](const Point& y) { return m.expansion_regular_part(a, y); }, x, h);
}

/// Laplacian of G in its first slot (equals the second by symmetry).
inline double lap_green(const SlabModel& m, const Point& a, const Point& x, double h = 1e-3) {
    return fd_laplacian([&](const Point& y) { return m.green(y, x); }, a, h);
}

inline bool is_boundary_center(const Point& a) { return SlabModel::boundary_distance(a) == 0; }

} // namespace detail

/// Leading terms of the projected-bubble expansion near its center:
///   interior a:  hat-delta + ln(lambda/2) + H(a,x) + Lap H(a,x)/(4 lambda^2)
///   boundary a:  hat-delta + ln(lambda/2) + H(a,x)/2 + Lap H(a,x)/(8 lambda^2)
/// with H the cutoff-decomposition regular part.
inline double expansion_near(const SlabModel& model, const Point& a, double lambda,
                             const Point& x, double lambda_floor = 10.0) {
    detail::require_lambda(lambda, lambda_floor);
    double base = truncated_bubble(model, a, lambda, x) + std::log(lambda / 2);
    double hreg = model.expansion_regular_part(a, x);
    double lap = detail::lap_expansion_h(model, a, x);
    if (detail::is_boundary_center(a)) return base + 0.5 * hreg + lap / (8 * lambda * lambda);
    return base + hreg + lap / (4 * lambda * lambda);
}

/// Leading terms away from the center:
///   interior a:  G(a,x) + Lap G(a,x)/(4 lambda^2)
///   boundary a:  G(a,x)/2 + Lap G(a,x)/(8 lambda^2).
inline double expansion_far(const SlabModel& model, const Point& a, double lambda,
                            const Point& x, double lambda_floor = 10.0) {
    detail::require_lambda(lambda, lambda_floor);
    double g = model.green(a, x);
    double lap = detail::lap_green(model, a, x);
    if (detail::is_boundary_center(a)) return 0.5 * g + lap / (8 * lambda * lambda);
    return g + lap / (4 * lambda * lambda);
}

/// Leading terms of the self-interaction <P phi, phi>:
///   interior a:  32 pi^2 ln l - 40 pi^2/3 + 16 pi^2 H(a,a) + 8 pi^2 Lap H/l^2
///   boundary a:  16 pi^2 ln l - 20 pi^2/3 +  4 pi^2 H(a,a) + 2 pi^2 Lap H/l^2.
inline double expansion_self(const SlabModel& model, const Point& a, double lambda,
                             double lambda_floor = 10.0) {
    detail::require_lambda(lambda, lambda_floor);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double haa = model.expansion_regular_part(a, a);
    double lap = detail::lap_expansion_h(model, a, a);
    double l2 = lambda * lambda;
    if (detail::is_boundary_center(a))
        return 16 * pi2 * std::log(lambda) - 20 * pi2 / 3 + 4 * pi2 * haa + 2 * pi2 * lap / l2;
    return 32 * pi2 * std::log(lambda) - 40 * pi2 / 3 + 16 * pi2 * haa + 8 * pi2 * lap / l2;
}

/// Closed-form leading structure of the functional on a bubble sum, with
/// per-point masses alpha_i and scales lambda_i and optional negative
/// eigendata (mu_r, beta_r).  The O-remainders are dropped, never
/// estimated.
struct EnergyExpansion {
    double leading = 0;        // critical level at infinity
    double mass_defect = 0;    // 16 pi^2 weighted (alpha - 1)^2 ln lambda
    double sigma_defect = 0;   // -4 pi^2 weighted sigma_i^2
    double neg_eigen = 0;      // sum mu_r beta_r^2
    double boundary_drift = 0; // -2 pi^2 sum (1/lambda_i) dF_i/dn / F_i
    double total = 0;
};

inline EnergyExpansion energy_expansion(const SlabModel& model, const Configuration& cfg,
                                        const std::vector<double>& alphas,
                                        const std::vector<double>& lambdas,
                                        const std::vector<double>& mus = {},
                                        const std::vector<double>& betas = {},
                                        double lambda_floor = 10.0) {
    const int p = cfg.p(), n = cfg.p() + cfg.q();
    if ((int)alphas.size() != n || (int)lambdas.size() != n)
        throw std::domain_error("energy_expansion: need one alpha and lambda per point");
    if (mus.size() != betas.size())
        throw std::domain_error("energy_expansion: mus and betas must pair up");
    for (double l : lambdas) detail::require_lambda(l, lambda_floor);

    const double pi2 = std::numbers::pi * std::numbers::pi;
    const int k = cfg.k();
    EnergyExpansion out;
    out.leading = -(20.0 / 3.0) * k * pi2 - 4 * k * pi2 * std::log(k * pi2 / 6.0) -
                  8 * pi2 * f_pq(model, cfg);

    for (int i = 0; i < n; ++i) {
        double w = i < p ? 2.0 : 1.0;
        double am1 = alphas[i] - 1.0;
        out.mass_defect += 16 * pi2 * w * am1 * am1 * std::log(lambdas[i]);
    }
    for (size_t r = 0; r < mus.size(); ++r) out.neg_eigen += mus[r] * betas[r] * betas[r];

    // sigma_i = 1 - k Gamma_i / Gamma with
    // Gamma_i = (pi^2/4) lambda^{8 alpha - 4} F_i(a_i) G_i(a_i) /
    //           ((2 alpha - 1)(4 alpha - 1))
    std::vector<double> gamma(n);
    for (int i = 0; i < n; ++i) {
        const Point ai = cfg.at(i);
        const bool interior = i < p;
        double expo = 0;
        double self_w = interior ? 1.0 : 0.5;
        expo += 4 * self_w * (alphas[i] - 1) * model.expansion_regular_part(ai, ai);
        double lap_terms = (interior ? alphas[i] : 0.5 * alphas[i]) /
                           (lambdas[i] * lambdas[i]) * detail::lap_expansion_h(model, ai, ai);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Point aj = cfg.at(j);
            double wj = j < p ? 1.0 : 0.5;
            expo += 4 * wj * (alphas[j] - 1) * model.green(aj, ai);
            lap_terms += wj * alphas[j] / (lambdas[j] * lambdas[j]) *
                         detail::lap_green(model, aj, ai);
        }
        double gi = std::exp(expo + lap_terms);
        double denom = (2 * alphas[i] - 1) * (4 * alphas[i] - 1);
        gamma[i] = (pi2 / 4.0) * std::pow(lambdas[i], 8 * alphas[i] - 4) *
                   partial_f(model, cfg, i) * gi / denom;
    }
    double gamma_total = 0;
    for (int i = 0; i < n; ++i) gamma_total += (i < p ? 2.0 : 1.0) * gamma[i];
    for (int i = 0; i < n; ++i) {
        double sigma = 1.0 - k * gamma[i] / gamma_total;
        out.sigma_defect += -4 * pi2 * (i < p ? 2.0 : 1.0) * sigma * sigma;
    }

    for (int i = 0; i < cfg.q(); ++i) {
        auto e = detail::partial_exponent(model, cfg, p + i, cfg.at(p + i), true);
        double dn_over_f = 4 * e.grad[3]; // (dF/dn) / F for the inward normal
        out.boundary_drift += -2 * pi2 * dn_over_f / lambdas[p + i];
    }

    out.total = out.leading + out.mass_defect + out.sigma_defect + out.neg_eigen +
                out.boundary_drift;
    return out;
}

} // namespace qcurv
