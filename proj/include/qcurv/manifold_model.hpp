#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcurv/errors.hpp"
#include "qcurv/expr.hpp"

namespace qcurv {

using Point = Eigen::Vector4d;
using BoundaryPoint = Eigen::Vector3d;

inline Point embed_boundary(const BoundaryPoint& b) { return Point(b[0], b[1], b[2], 0.0); }

/// Regular-grid scalar field on a 4-d box with separable Catmull-Rom
/// interpolation (C^1), clamped at the edges.  Values are indexed
/// values[((i1*n2 + i2)*n3 + i3)*n4 + i4].
class GridField {
public:
    GridField(std::array<int, 4> dims, std::array<double, 4> origin,
              std::array<double, 4> spacing, std::vector<double> values)
        : dims_(dims), origin_(origin), spacing_(spacing), values_(std::move(values)) {
        size_t total = 1;
        for (int d = 0; d < 4; ++d) {
            if (dims_[d] < 2) throw data_error("GridField: each dimension needs >= 2 samples");
            if (spacing_[d] <= 0) throw data_error("GridField: spacing must be positive");
            total *= (size_t)dims_[d];
        }
        if (values_.size() != total)
            throw data_error("GridField: value count does not match dims");
    }

    double value(const Point& x) const { return eval(x, -1); }

    Eigen::Vector4d gradient(const Point& x) const {
        Eigen::Vector4d g;
        for (int d = 0; d < 4; ++d) g[d] = eval(x, d);
        return g;
    }

private:
    static void weights(double t, double* w) {
        w[0] = ((-0.5 * t + 1.0) * t - 0.5) * t;
        w[1] = (1.5 * t - 2.5) * t * t + 1.0;
        w[2] = ((-1.5 * t + 2.0) * t + 0.5) * t;
        w[3] = (0.5 * t - 0.5) * t * t;
    }
    static void dweights(double t, double* w) {
        w[0] = (-1.5 * t + 2.0) * t - 0.5;
        w[1] = (4.5 * t - 5.0) * t;
        w[2] = (-4.5 * t + 4.0) * t + 0.5;
        w[3] = 1.5 * t * t - t;
    }

    double sample(int i1, int i2, int i3, int i4) const {
        auto cl = [](int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); };
        size_t idx = ((size_t)cl(i1, dims_[0]) * dims_[1] + cl(i2, dims_[1]));
        idx = (idx * dims_[2] + cl(i3, dims_[2])) * dims_[3] + cl(i4, dims_[3]);
        return values_[idx];
    }

    // deriv_axis = -1 for the value, else d/dx_axis
    double eval(const Point& x, int deriv_axis) const {
        int base[4];
        double w[4][4];
        for (int d = 0; d < 4; ++d) {
            double u = (x[d] - origin_[d]) / spacing_[d];
            double fl = std::floor(u);
            base[d] = (int)fl;
            double t = u - fl;
            if (d == deriv_axis) dweights(t, w[d]);
            else weights(t, w[d]);
        }
        double acc = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int e = 0; e < 4; ++e) {
                        double ww = w[0][a] * w[1][b] * w[2][c] * w[3][e];
                        if (ww == 0) continue;
                        acc += ww * sample(base[0] + a - 1, base[1] + b - 1, base[2] + c - 1,
                                           base[3] + e - 1);
                    }
        if (deriv_axis >= 0) acc /= spacing_[deriv_axis];
        return acc;
    }

    std::array<int, 4> dims_;
    std::array<double, 4> origin_, spacing_;
    std::vector<double> values_;
};

/// Scalar field on the slab: an analytic expression in x1..x4 (with exact
/// symbolic gradient) or a grid sample (with the interpolant's own
/// gradient).
class ScalarField {
public:
    static ScalarField constant(double v) {
        ScalarField f;
        f.expr_ = expr::Expression::constant(v);
        return f;
    }
    static ScalarField expression(std::string_view src) {
        ScalarField f;
        f.expr_ = expr::Expression::parse(src);
        return f;
    }
    static ScalarField grid(GridField g) {
        ScalarField f;
        f.grid_ = std::make_shared<GridField>(std::move(g));
        return f;
    }

    bool is_grid() const { return grid_ != nullptr; }

    double value(const Point& x) const {
        if (grid_) return grid_->value(x);
        return expr_(std::span<const double>(x.data(), 4));
    }

    Eigen::Vector4d gradient(const Point& x) const {
        if (grid_) return grid_->gradient(x);
        ensure_derivs();
        Eigen::Vector4d g;
        for (int d = 0; d < 4; ++d) g[d] = (*derivs_)[d](std::span<const double>(x.data(), 4));
        return g;
    }

private:
    void ensure_derivs() const {
        if (!derivs_) {
            auto d = std::make_shared<std::array<expr::Expression, 4>>();
            for (int i = 0; i < 4; ++i) (*d)[i] = expr_.derivative(i);
            derivs_ = std::move(d);
        }
    }

    expr::Expression expr_ = expr::Expression::constant(0);
    mutable std::shared_ptr<std::array<expr::Expression, 4>> derivs_;
    std::shared_ptr<GridField> grid_;
};

/// Symmetric two-point field for the user part of the Green regular part.
/// Either an expression in x1..x4 (first point) and x5..x8 (second point),
/// or a single-point field h symmetrized as (h(x)+h(y))/2, or zero.
class PairField {
public:
    static PairField zero() { return PairField{}; }

    static PairField pair_expression(std::string_view src) {
        PairField f;
        f.mode_ = Mode::pair;
        f.pair_ = expr::Expression::parse(src);
        for (int i = 0; i < 8; ++i) f.pair_derivs_[i] = f.pair_.derivative(i);
        return f;
    }

    static PairField symmetrized(ScalarField h) {
        PairField f;
        f.mode_ = Mode::symmetrized;
        f.single_ = std::move(h);
        return f;
    }

    double value(const Point& x, const Point& y) const {
        switch (mode_) {
            case Mode::none: return 0;
            case Mode::pair: {
                double v[8] = {x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3]};
                return pair_(v);
            }
            case Mode::symmetrized: return 0.5 * (single_.value(x) + single_.value(y));
        }
        return 0;
    }

    Eigen::Vector4d grad_second(const Point& x, const Point& y) const {
        switch (mode_) {
            case Mode::none: return Eigen::Vector4d::Zero();
            case Mode::pair: {
                double v[8] = {x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3]};
                Eigen::Vector4d g;
                for (int d = 0; d < 4; ++d) g[d] = pair_derivs_[4 + d](v);
                return g;
            }
            case Mode::symmetrized: return 0.5 * single_.gradient(y);
        }
        return Eigen::Vector4d::Zero();
    }

private:
    enum class Mode { none, pair, symmetrized };
    Mode mode_ = Mode::none;
    expr::Expression pair_;
    std::array<expr::Expression, 8> pair_derivs_;
    ScalarField single_ = ScalarField::constant(0);
};

/// Flat-slab manifold model: the parameter box sits in the closed upper
/// half of 4-space with the boundary at x4 = 0 and inward normal +e4.
/// The Green function is the method-of-images kernel
///   G(x, y) = -2 ln|x - y| - 2 ln|x - ybar| + H(x, y),
/// whose regular part is exactly the user field H, so every derivative the
/// functional needs is available in closed form.
class SlabModel {
public:
    struct Spec {
        std::array<double, 4> box_lo{-1, -1, -1, 0};
        std::array<double, 4> box_hi{1, 1, 1, 1};
        double rho_floor = 0.05;  // interior points keep x4 >= rho_floor
        double eta_floor = 0.05;  // pairwise separation floor
        double rho = 0.25;        // cutoff radius of chi_rho
        bool green_images = true; // false: G = H = 0 (degenerate test model)
        ScalarField K = ScalarField::constant(1.0);
        PairField H = PairField::zero();
        bool grid_based = false;  // relaxes gradient tolerances downstream
    };

    explicit SlabModel(Spec spec) : spec_(std::move(spec)) {
        if (spec_.box_lo[3] != 0)
            throw data_error("SlabModel: the box must rest on the boundary x4 = 0");
        for (int d = 0; d < 4; ++d)
            if (spec_.box_lo[d] >= spec_.box_hi[d])
                throw data_error("SlabModel: empty box");
        if (spec_.rho <= 0 || spec_.rho_floor <= 0 || spec_.eta_floor <= 0)
            throw data_error("SlabModel: floors and cutoff radius must be positive");
    }

    const Spec& spec() const { return spec_; }
    double rho() const { return spec_.rho; }
    double rho_floor() const { return spec_.rho_floor; }
    double eta_floor() const { return spec_.eta_floor; }
    bool grid_based() const { return spec_.grid_based; }

    static double distance(const Point& x, const Point& y) { return (x - y).norm(); }
    static double boundary_distance(const Point& x) { return x[3]; }
    static Point reflect(const Point& x) { return Point(x[0], x[1], x[2], -x[3]); }

    bool in_box(const Point& x) const {
        for (int d = 0; d < 4; ++d)
            if (x[d] < spec_.box_lo[d] || x[d] > spec_.box_hi[d]) return false;
        return true;
    }

    // cutoff: identity below rho, constant 2 rho above 2 rho, monotone
    // cubic Hermite in between
    double chi_rho(double t) const {
        const double r = spec_.rho;
        if (t <= r) return t;
        if (t >= 2 * r) return 2 * r;
        double s = (t - r) / r;
        return r * (((-s + 1) * s + 1) * s + 1);
    }
    double chi_rho_deriv(double t) const {
        const double r = spec_.rho;
        if (t <= r) return 1;
        if (t >= 2 * r) return 0;
        double s = (t - r) / r;
        return (-3 * s + 2) * s + 1;
    }

    double k_value(const Point& x) const {
        double k = spec_.K.value(x);
        if (!(k > 0)) throw data_error("SlabModel: K must stay positive");
        return k;
    }
    Eigen::Vector4d grad_ln_k(const Point& x) const {
        return spec_.K.gradient(x) / k_value(x);
    }
    /// Inward normal derivative of ln K at a boundary point.
    double dln_k_dn(const BoundaryPoint& b) const { return grad_ln_k(embed_boundary(b))[3]; }

    static double scalar_curvature(const Point&) { return 0.0; }

    double green(const Point& x, const Point& y) const {
        if (!spec_.green_images) return 0.0;
        double d = (x - y).norm();
        if (d == 0) throw std::domain_error("green: coincident points");
        double dbar = (reflect(x) - y).norm();
        return -2 * std::log(d) - 2 * std::log(dbar) + spec_.H.value(x, y);
    }

    Eigen::Vector4d green_grad_second(const Point& x, const Point& y) const {
        if (!spec_.green_images) return Eigen::Vector4d::Zero();
        Eigen::Vector4d dxy = x - y;
        double d2 = dxy.squaredNorm();
        if (d2 == 0) throw std::domain_error("green: coincident points");
        Eigen::Vector4d dby = reflect(x) - y;
        return 2 * dxy / d2 + 2 * dby / dby.squaredNorm() + spec_.H.grad_second(x, y);
    }

    double regular_part(const Point& x, const Point& y) const {
        if (!spec_.green_images) return 0.0;
        return spec_.H.value(x, y);
    }
    Eigen::Vector4d regular_part_grad_second(const Point& x, const Point& y) const {
        if (!spec_.green_images) return Eigen::Vector4d::Zero();
        return spec_.H.grad_second(x, y);
    }

    /// Cutoff singular part:  -2 ln chi(d(x,y)), plus the reflected term
    /// when the evaluation point sits within rho of the boundary.  Used to
    /// verify that G - S stays bounded across the diagonal.
    double singular_part_cutoff(const Point& x, const Point& y) const {
        double s = -2 * std::log(chi_rho((x - y).norm()));
        if (boundary_distance(y) < spec_.rho)
            s += -2 * std::log(chi_rho((reflect(x) - y).norm()));
        return s;
    }

    /// Regular part of the cutoff decomposition G = S + H, the H the
    /// bubble expansions are written in.  Differs from regular_part() by
    /// smooth image terms; finite on the diagonal (both log differences
    /// cancel exactly inside the cutoff radius).
    double expansion_regular_part(const Point& a, const Point& x) const {
        if (!spec_.green_images) return 0.0;
        auto log_defect = [&](double t) { // -2 ln t + 2 ln chi(t), zero within rho
            return t <= spec_.rho ? 0.0 : -2 * std::log(t) + 2 * std::log(chi_rho(t));
        };
        double d = (a - x).norm();
        double dbar = (reflect(a) - x).norm();
        double s = spec_.H.value(a, x) + log_defect(d);
        if (boundary_distance(x) < spec_.rho) s += log_defect(dbar);
        else s += -2 * std::log(dbar);
        return s;
    }

    /// Sampled invariants: symmetry of G and H to 1e-10 and positivity of
    /// K.  Throws data_error on the first violation.
    void verify_invariants(unsigned seed = 7, int samples = 200) const {
        std::mt19937_64 rng(seed);
        auto pick = [&](double floor4) {
            Point p;
            for (int d = 0; d < 3; ++d)
                p[d] = std::uniform_real_distribution<double>(spec_.box_lo[d],
                                                              spec_.box_hi[d])(rng);
            p[3] = std::uniform_real_distribution<double>(floor4, spec_.box_hi[3])(rng);
            return p;
        };
        for (int it = 0; it < samples; ++it) {
            Point x = pick(0.0), y = pick(0.0);
            if ((x - y).norm() < 1e-6) continue;
            k_value(x);
            if (!spec_.green_images) continue;
            double g1 = green(x, y), g2 = green(y, x);
            if (std::abs(g1 - g2) > 1e-10 * std::max(1.0, std::abs(g1)))
                throw data_error("SlabModel: Green function fails the symmetry check");
            double h1 = regular_part(x, y), h2 = regular_part(y, x);
            if (std::abs(h1 - h2) > 1e-10 * std::max(1.0, std::abs(h1)))
                throw data_error("SlabModel: regular part fails the symmetry check");
        }
    }

private:
    Spec spec_;
};

} // namespace qcurv
