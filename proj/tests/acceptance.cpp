// Acceptance suite: the binding end-to-end checks of the toolkit, one
// criterion per function, each printing a single pass/fail line with its
// runtime.  Tolerances and thresholds are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qcurv/boundary_barycenter.hpp"
#include "qcurv/bubble.hpp"
#include "qcurv/critical_points.hpp"
#include "qcurv/morse_certifier.hpp"
#include "model_fixtures.hpp"
#include "synthetic.hpp"

using namespace qcurv;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string note;
};

int failures = 0;

void run(int id, const std::string& label, double budget_seconds,
         const std::function<Outcome()>& body) {
    auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_budget = budget_seconds <= 0 || secs < budget_seconds;
    bool pass = out.pass && in_budget;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.2fs%s)%s%s\n", pass ? "PASS" : "FAIL", id,
                label.c_str(), secs, in_budget ? "" : ", OVER BUDGET",
                out.note.empty() ? "" : " -- ", out.note.c_str());
}

// independent exhaustive-search oracle for criterion 5 (depth-first over
// every n_i in [0, bound], pruning on fully assigned equations)
bool brute_feasible(const std::vector<long long>& m, const std::vector<long long>& p,
                    long long bound) {
    const int N = (int)m.size();
    std::vector<long long> n(N, 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == N) return n[N - 1] == 0;
        for (long long v = 0; v <= bound; ++v) {
            n[i] = v;
            long long pi = i < (int)p.size() ? p[i] : 0;
            if (pi + n[i] + (i > 0 ? n[i - 1] : 0) == m[i] && rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

Outcome criterion1_disk_golden() {
    auto betti = boundary_betti(disk_input(), 2);
    bool ok = betti == BettiTable::reduced({{2, 1}, {3, 1}});
    return {ok, ok ? "" : "disk table mismatch"};
}

Outcome criterion2_euler_closed_form() {
    for (int l = 1; l <= 20; ++l)
        if (chi_barycenter(0, l) != 0)
            return {false, "chi_barycenter(0, " + std::to_string(l) + ") != 0"};
    return {true, ""};
}

Outcome criterion3_cross_check() {
    testgen::Rng rng(2026);
    int inputs = 0;
    for (int trial = 0; trial < 24; ++trial) {
        long long chi_M = std::uniform_int_distribution<long long>(-4, 4)(rng);
        auto in = testgen::random_input(rng, chi_M, 12);
        ++inputs;
        for (int l = 1; l <= 6; ++l)
            if (euler_characteristic(boundary_betti(in, l)) !=
                euler_boundary(chi_M, l, true))
                return {false, "mismatch at chi=" + std::to_string(chi_M) +
                                   ", l=" + std::to_string(l)};
    }
    return {true, std::to_string(inputs) + " synthetic inputs, orders 1..6, exact"};
}

Outcome criterion4_disjoint_circles() {
    auto s1 = BarycenterProvider::circle();
    bool ok = disjoint_union_barycenter(s1, s1, 3) == BettiTable::reduced({{5, 4}, {4, 3}});
    return {ok, ok ? "" : "union table mismatch"};
}

Outcome criterion5_feasibility_oracle() {
    testgen::Rng rng(2027);
    std::uniform_int_distribution<int> kdist(1, 4);
    std::uniform_int_distribution<long long> entry(0, 10);
    std::uniform_int_distribution<int> sparsity(0, 3);
    for (int it = 0; it < 1000; ++it) {
        int k = kdist(rng);
        MorseCounts m;
        m.m.assign(4 * k, 0);
        for (auto& x : m.m) x = sparsity(rng) == 0 ? entry(rng) : entry(rng) % 3;
        std::vector<long long> p;
        FeasibilityVerdict verdict;
        if (k == 1) {
            p = {1};
            verdict = check_system_k1(m);
        } else {
            std::vector<long long> c(4 * k - 4, 0);
            for (auto& x : c) x = entry(rng) % 4;
            p.assign(4 * k, 0);
            for (int i = 2; i <= 4 * k - 4; ++i) p[i] = c[i - 1];
            verdict = check_system_k(m, c, k);
        }
        long long bound = 0;
        for (auto x : m.m) bound += x;
        for (auto x : p) bound += x;
        if (verdict.feasible != brute_feasible(m.m, p, bound))
            return {false, "disagreement at instance " + std::to_string(it)};
    }
    return {true, "1000 instances, k <= 4, zero disagreements"};
}

Outcome criterion6_hopf_is_morse_at_minus_one() {
    testgen::Rng rng(2028);
    std::uniform_int_distribution<int> npts(0, 12), sign(0, 2);
    for (int it = 0; it < 1000; ++it) {
        CritSummary s;
        s.k = 1 + it % 4;
        int n = npts(rng);
        for (int i = 0; i < n; ++i) {
            CritRecord r;
            std::uniform_int_distribution<int> pd(0, s.k / 2);
            r.p = pd(rng);
            r.q = s.k - 2 * r.p;
            std::uniform_int_distribution<int> idx(r.p + r.q - 1, 5 * r.p + 4 * r.q - 1);
            r.i_inf = idx(rng);
            r.lk_sign = sign(rng) ? -1 : 1;
            s.points.push_back(r);
        }
        if (hopf_sum(s) != assemble_counts(s).polynomial().at_minus_one())
            return {false, "mismatch at summary " + std::to_string(it)};
    }
    return {true, "1000 summaries, exact"};
}

Outcome criterion7_gradient_fidelity() {
    auto model = testgen::standard_model();
    testgen::Rng rng(2029);
    const std::pair<int, int> splits[] = {{0, 1}, {0, 2}, {1, 0}, {0, 3},
                                          {1, 1}, {0, 4}, {1, 2}, {2, 0}};
    const double h = 1e-5, tol = 1e-6;
    for (auto [p, q] : splits) {
        for (int it = 0; it < 100; ++it) {
            auto cfg = testgen::random_configuration(rng, model, p, q);
            auto an = grad_f_pq(model, cfg);
            double scale = std::max(1.0, an.norm());
            for (int i = 0; i < p; ++i)
                for (int d = 0; d < 4; ++d) {
                    auto plus = cfg, minus = cfg;
                    plus.interior[i][d] += h;
                    minus.interior[i][d] -= h;
                    double fd = (f_pq(model, plus) - f_pq(model, minus)) / (2 * h);
                    if (std::abs(an.interior[i][d] - fd) > tol * scale)
                        return {false, "interior mismatch at (p,q)=(" + std::to_string(p) +
                                           "," + std::to_string(q) + ")"};
                }
            for (int i = 0; i < q; ++i)
                for (int d = 0; d < 3; ++d) {
                    auto plus = cfg, minus = cfg;
                    plus.boundary[i][d] += h;
                    minus.boundary[i][d] -= h;
                    double fd = (f_pq(model, plus) - f_pq(model, minus)) / (2 * h);
                    if (std::abs(an.boundary[i][d] - fd) > tol * scale)
                        return {false, "boundary mismatch at (p,q)=(" + std::to_string(p) +
                                           "," + std::to_string(q) + ")"};
                }
        }
    }
    return {true, "100 configurations per mass split, 1e-6 relative"};
}

Outcome criterion8_critical_point_recovery() {
    const double cx = 0.15, cy = -0.25, cz = 0.35;
    for (double slope : {1.0, -0.7}) {
        auto model = testgen::one_bump_model(cx, cy, cz, slope);
        SearchConfig sc;
        sc.starts = 24;
        sc.seed = 5;
        auto rep = find_critical_points(model, 0, 1, sc);
        if (rep.points.size() != 1) return {false, "expected exactly one point"};
        const auto& pt = rep.points[0];
        if ((pt.config.boundary[0] - BoundaryPoint(cx, cy, cz)).norm() >= 1e-6)
            return {false, "maximum not recovered within 1e-6"};
        if (pt.morse_index != 3) return {false, "morse index != 3"};
        if (pt.i_inf != 0) return {false, "i_inf != 0"};
        if (pt.lk_sign != (slope > 0 ? 1 : -1))
            return {false, "L_K sign does not track dK/dn"};
    }
    return {true, "both normal-slope signs verified"};
}

Outcome criterion9_bubble_pde() {
    Bubble b;
    double r1 = bubble_pde_residual(b, 0.02);
    double r2 = bubble_pde_residual(b, 0.01);
    if (r1 >= 0.5) return {false, "residual at h=0.02 is " + std::to_string(r1)};
    double order = std::log2(r1 / r2);
    if (order < 1.9) return {false, "order " + std::to_string(order) + " < 1.9"};
    char note[128];
    std::snprintf(note, sizeof note, "residual %.3g -> %.3g, order %.3f (source 6e^{4d}=96)",
                  r1, r2, order);
    return {true, note};
}

Outcome criterion10_energy_identity() {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double got = energy_at_infinity(0.0, 1);
    double expect = -(20.0 / 3.0) * pi2 - 4.0 * pi2 * std::log(pi2 / 6.0);
    bool ok = std::abs(got - expect) <= 1e-12 * std::abs(expect);
    return {ok, ok ? "" : "identity off by " + std::to_string(got - expect)};
}

} // namespace

int main() {
    run(1, "disk golden value B_2^d(D) = {2:1, 3:1}", 1.0, criterion1_disk_golden);
    run(2, "chi(B_l) = 0 for chi = 0, l = 1..20, exact", 0, criterion2_euler_closed_form);
    run(3, "homology vs Euler closed form on synthetic inputs", 0, criterion3_cross_check);
    run(4, "B_3(S^1 u S^1) = 4 S^5 v 3 S^4", 0, criterion4_disjoint_circles);
    run(5, "feasibility recursion vs exhaustive enumeration", 30.0,
        criterion5_feasibility_oracle);
    run(6, "hopf sum equals the Morse polynomial at -1", 0,
        criterion6_hopf_is_morse_at_minus_one);
    run(7, "gradient matches finite differences to 1e-6", 0, criterion7_gradient_fidelity);
    run(8, "one-bump critical point recovery and L_K sign", 10.0,
        criterion8_critical_point_recovery);
    run(9, "bubble equation residual order >= 1.9", 60.0, criterion9_bubble_pde);
    run(10, "energy level identity at F = 0, k = 1", 0, criterion10_energy_identity);

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
