// Command-line pipeline over the toolkit: topology of boundary-weighted
// barycenter spaces, critical-point search on slab models, and the
// Morse/Hopf/jump certification, each emitting machine-readable reports.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcurv/bubble.hpp"
#include "qcurv/serialization.hpp"

using namespace qcurv;

namespace {

constexpr int kExitUsage = 2;

struct SpaceSetup {
    BoundaryBarycenterInput input;
    std::string boundary_name;
    std::string quotient_name;
};

SpaceSetup make_builtin_space(const std::string& name) {
    if (name == "disk") return {disk_input(), "circle", "sphere2"};
    if (name == "annulus") return {annulus_input(), "circle", "sphere2_wedge_circle"};
    throw data_error("unknown builtin space '" + name + "' (have: disk, annulus)");
}

/// Resolve the topology input from flags: a builtin space, optionally with
/// provider overrides from a user table file, or a fully custom pair of
/// named spaces from the file.
BoundaryBarycenterInput resolve_space(const std::string& space, const std::string& tables_path,
                                      const std::string& boundary_space,
                                      const std::string& quotient_space,
                                      std::optional<long long> chi, std::optional<int> dim) {
    std::map<std::string, BarycenterProvider> file_providers;
    if (!tables_path.empty())
        file_providers = providers_from_json(load_json_file(tables_path));

    if (!space.empty()) {
        SpaceSetup setup = make_builtin_space(space);
        auto it = file_providers.find(setup.quotient_name);
        if (it != file_providers.end()) setup.input.quotient = it->second;
        it = file_providers.find(setup.boundary_name);
        if (it != file_providers.end()) setup.input.boundary = it->second;
        return setup.input;
    }
    if (boundary_space.empty() || quotient_space.empty() || !chi || !dim)
        throw data_error("need --space, or --boundary-space/--quotient-space with "
                         "--chi and --dim plus --barycenter-tables");
    auto bit = file_providers.find(boundary_space);
    auto qit = file_providers.find(quotient_space);
    if (bit == file_providers.end() || qit == file_providers.end())
        throw data_error("table file does not declare both named spaces");
    return BoundaryBarycenterInput{bit->second, qit->second, *chi, *dim};
}

void emit(const Json& report, const std::string& out, const std::string& format,
          const std::string& text_rendering) {
    std::string payload = format == "text" ? text_rendering : dump_report(report);
    if (out.empty()) std::cout << payload;
    else write_file(out, payload);
}

// ------------------------------------------------------------- topology

int run_topology(const std::string& space, const std::string& tables_path,
                 const std::string& boundary_space, const std::string& quotient_space,
                 std::optional<long long> chi, std::optional<int> dim, int order,
                 const std::string& out, const std::string& format) {
    Json report;
    std::ostringstream text;

    const bool euler_only = space.empty() && boundary_space.empty() && chi.has_value();
    if (euler_only) {
        report["chi_M"] = *chi;
        Json orders = Json::array();
        for (int l = 1; l <= order; ++l) {
            long long e = euler_boundary(*chi, l, true);
            orders.push_back(Json{{"order", l}, {"euler", e}});
            text << "order " << l << ": euler " << e << "\n";
        }
        report["orders"] = std::move(orders);
        emit(report, out, format, text.str());
        return 0;
    }

    auto input = resolve_space(space, tables_path, boundary_space, quotient_space, chi, dim);
    input.validate();
    report["space"] = space.empty() ? boundary_space + "/" + quotient_space : space;
    report["chi_M"] = input.chi_M;
    report["dim_M"] = input.dim_M;
    Json orders = Json::array();
    bool all_consistent = true;
    for (int l = 1; l <= order; ++l) {
        BettiTable betti = boundary_betti(input, l);
        long long chi_table = euler_characteristic(betti);
        bool consistent = true;
        if (input.dim_M % 2 == 0)
            consistent = chi_table == euler_boundary(input.chi_M, l, true);
        all_consistent = all_consistent && consistent;
        orders.push_back(topology_report_to_json(l, betti, chi_table, consistent));
        text << "order " << l << ": euler " << chi_table
             << (consistent ? "" : "  CONSISTENCY FAIL") << "\n"
             << betti_to_lines(betti);
    }
    report["orders"] = std::move(orders);
    emit(report, out, format, text.str());
    return all_consistent ? 0 : kExitUsage;
}

// ----------------------------------------------------------- critpoints

Json run_critpoints_json(const SlabModel& model, int k, int kbar, long long chi_M,
                         const SearchConfig& sc) {
    CritSummary summary;
    summary.k = k;
    summary.kbar = kbar;
    summary.chi_M = chi_M;
    Json searches = Json::array();
    bool any_degenerate = false;
    for (int p = 0; 2 * p <= k; ++p) {
        int q = k - 2 * p;
        if (p + q == 0) continue;
        auto rep = find_critical_points(model, p, q, sc);
        any_degenerate = any_degenerate || rep.degenerate_warning;
        for (const auto& pt : rep.points)
            summary.points.push_back(CritRecord{p, q, pt.i_inf, pt.lk_sign});
        searches.push_back(search_report_to_json(rep, p, q, sc));
    }
    Json out;
    out["k"] = k;
    out["kbar"] = kbar;
    out["chi_M"] = chi_M;
    out["summary"] = summary_to_json(summary);
    out["searches"] = std::move(searches);
    if (any_degenerate) out["degenerate_warning"] = true;
    out["seed"] = sc.seed;
    return out;
}

std::string render_critpoints_text(const Json& j) {
    std::ostringstream os;
    os << "k = " << j["k"].get<int>() << ", kbar = " << j["kbar"].get<int>() << "\n";
    for (const auto& rec : j["summary"]["records"])
        os << "  (p=" << rec["p"].get<int>() << ", q=" << rec["q"].get<int>()
           << ") i_inf=" << rec["i_inf"].get<int>() << " lk_sign=" << rec["lk_sign"].get<int>()
           << "\n";
    if (j.contains("degenerate_warning")) os << "  warning: degenerate points were excluded\n";
    return os.str();
}

// -------------------------------------------------------------- certify

std::vector<long long> c_array_from_topology(const BoundaryBarycenterInput& input, int k) {
    BettiTable reduced = boundary_betti(input, k - 1);
    std::vector<long long> c(4 * (size_t)k - 4, 0);
    c[0] = reduced.rank(0) + 1; // unreduced degree 0
    for (auto& [d, r] : reduced.ranks())
        if (d >= 1) {
            if (d >= (int)c.size())
                throw data_error("boundary topology exceeds the certifier's degree range");
            c[(size_t)d] += r;
        }
    return c;
}

int run_certify(const CritSummary& summary, const std::vector<long long>& c,
                const std::string& out, const std::string& format) {
    auto rep = certify(summary, c);
    Json j = certify_report_to_json(rep);
    std::ostringstream text;
    text << "verdict: " << j["verdict"].get<std::string>() << "\n"
         << "  system " << (rep.system.feasible ? "feasible" : "infeasible") << ", hopf sum "
         << rep.hopf.sum << " vs target " << rep.hopf.target << "\n";
    for (const auto& jv : rep.jumps)
        if (jv.certified) text << "  jump criterion fires at l = " << jv.l << "\n";
    emit(j, out, format, text.str());
    return 0;
}

// ------------------------------------------------------------------ main

int dispatch(int argc, char** argv) {
    CLI::App app{"Topology and critical-point certification toolkit for the "
                 "prescribed Q-curvature problem on manifolds with boundary"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out, format = "json";
    unsigned seed = 1;
    app.add_option("--out", out, "write the report to this path (default stdout)");
    app.add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", seed, "base seed for randomized stages");

    // topology
    auto* topo = app.add_subcommand("topology", "Betti tables and Euler characteristics of "
                                                "boundary-weighted barycenter spaces");
    std::string t_space, t_tables, t_bspace, t_qspace;
    std::optional<long long> t_chi;
    std::optional<int> t_dim;
    int t_order = 2;
    topo->add_option("--space", t_space, "builtin space: disk or annulus");
    topo->add_option("--barycenter-tables", t_tables, "user table file (JSON)");
    topo->add_option("--boundary-space", t_bspace, "named boundary space in the table file");
    topo->add_option("--quotient-space", t_qspace, "named quotient space in the table file");
    topo->add_option("--chi", t_chi, "Euler characteristic of M (enables euler-only mode)");
    topo->add_option("--dim", t_dim, "dimension of M for custom spaces");
    topo->add_option("--order", t_order, "compute orders 1..L")->check(CLI::PositiveNumber);

    // critpoints
    auto* crit = app.add_subcommand("critpoints", "search the reduced functionals for "
                                                  "critical points across all mass splits");
    std::string c_model;
    int c_k = 1, c_kbar = 0, c_starts = 48;
    long long c_chi = 0;
    crit->add_option("--model", c_model, "slab model spec (JSON)")->required();
    crit->add_option("--k", c_k, "total mass 2p + q")->check(CLI::PositiveNumber);
    crit->add_option("--kbar", c_kbar, "negative eigenvalue count")
        ->check(CLI::NonNegativeNumber);
    crit->add_option("--chi", c_chi, "Euler characteristic recorded in the summary");
    crit->add_option("--starts", c_starts, "multi-start count")->check(CLI::PositiveNumber);

    // certify
    auto* cert = app.add_subcommand("certify", "run the Morse feasibility system and the "
                                               "Poincare-Hopf and jump criteria");
    std::string x_summary, x_space, x_tables, x_carray;
    cert->add_option("--summary", x_summary, "critical-point summary document")->required();
    cert->add_option("--space", x_space, "builtin space for the sublevel topology");
    cert->add_option("--barycenter-tables", x_tables, "user table file (JSON)");
    cert->add_option("--c", x_carray, "comma-separated unreduced c array override");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "critpoints, then topology, then certify");
    std::string p_model, p_space = "disk", p_tables;
    int p_k = 1, p_kbar = 0, p_starts = 48;
    pipe->add_option("--model", p_model, "slab model spec (JSON)")->required();
    pipe->add_option("--space", p_space, "builtin space: disk or annulus");
    pipe->add_option("--barycenter-tables", p_tables, "user table file (JSON)");
    pipe->add_option("--k", p_k, "total mass 2p + q")->check(CLI::PositiveNumber);
    pipe->add_option("--kbar", p_kbar, "negative eigenvalue count")
        ->check(CLI::NonNegativeNumber);
    pipe->add_option("--starts", p_starts, "multi-start count")->check(CLI::PositiveNumber);

    // bubble-check
    auto* bub = app.add_subcommand("bubble-check", "finite-difference verification of the "
                                                   "bubble equation");
    double b_h = 0.02, b_lambda = 1.0, b_half = 0.3;
    std::vector<double> b_center{0, 0, 0, 0};
    bub->add_option("--step", b_h, "grid step")->check(CLI::PositiveNumber);
    bub->add_option("--lambda", b_lambda, "bubble scale")->check(CLI::PositiveNumber);
    bub->add_option("--box-half", b_half, "half-width of the sample box");
    bub->add_option("--center", b_center, "bubble center (4 coords)")->expected(4);

    CLI11_PARSE(app, argc, argv);

    if (topo->parsed())
        return run_topology(t_space, t_tables, t_bspace, t_qspace, t_chi, t_dim, t_order, out,
                            format);

    if (crit->parsed()) {
        SlabModel model = model_from_json(load_json_file(c_model));
        SearchConfig sc;
        sc.seed = seed;
        sc.starts = c_starts;
        Json j = run_critpoints_json(model, c_k, c_kbar, c_chi, sc);
        emit(j, out, format, render_critpoints_text(j));
        return 0;
    }

    if (cert->parsed()) {
        Json doc = load_json_file(x_summary);
        CritSummary summary =
            summary_from_json(doc.contains("summary") ? doc["summary"] : doc);
        std::vector<long long> c;
        if (!x_carray.empty()) {
            std::istringstream is(x_carray);
            std::string tok;
            while (std::getline(is, tok, ',')) c.push_back(std::stoll(tok));
        } else if (summary.kbar > 0) {
            throw data_error("kbar > 0 requires an explicit --c array (the sublevel "
                             "topology for negative eigenvalues is not computed here)");
        } else if (summary.k >= 2) {
            auto input = resolve_space(x_space.empty() ? "disk" : x_space, x_tables, "", "",
                                       std::nullopt, std::nullopt);
            if (input.chi_M != summary.chi_M)
                throw data_error("summary chi_M does not match the topology space");
            c = c_array_from_topology(input, summary.k);
        }
        return run_certify(summary, c, out, format);
    }

    if (pipe->parsed()) {
        SlabModel model = model_from_json(load_json_file(p_model));
        auto input = resolve_space(p_space, p_tables, "", "", std::nullopt, std::nullopt);
        SearchConfig sc;
        sc.seed = seed;
        sc.starts = p_starts;
        Json cp = run_critpoints_json(model, p_k, p_kbar, input.chi_M, sc);
        CritSummary summary = summary_from_json(cp["summary"]);

        Json topo_report;
        std::vector<long long> c;
        if (summary.k >= 2 && summary.kbar == 0) {
            c = c_array_from_topology(input, summary.k);
            BettiTable betti = boundary_betti(input, summary.k - 1);
            topo_report = topology_report_to_json(
                summary.k - 1, betti, euler_characteristic(betti),
                euler_characteristic(betti) ==
                    euler_boundary(input.chi_M, summary.k - 1, true));
        } else if (summary.kbar > 0) {
            throw data_error("pipeline does not support kbar > 0; run certify with --c");
        }

        auto rep = certify(summary, c);
        Json j;
        j["critpoints"] = std::move(cp);
        if (!topo_report.is_null()) j["topology"] = std::move(topo_report);
        j["certify"] = certify_report_to_json(rep);
        std::ostringstream text;
        text << render_critpoints_text(j["critpoints"])
             << "verdict: " << j["certify"]["verdict"].get<std::string>() << "\n";
        emit(j, out, format, text.str());
        return 0;
    }

    if (bub->parsed()) {
        Bubble b{Point(b_center[0], b_center[1], b_center[2], b_center[3]), b_lambda};
        double r1 = bubble_pde_residual(b, b_h, b_half);
        double r2 = bubble_pde_residual(b, b_h / 2, b_half);
        double order = std::log2(r1 / r2);
        Json j;
        j["lambda"] = b_lambda;
        j["h"] = b_h;
        j["residual"] = r1;
        j["residual_half_step"] = r2;
        j["observed_order"] = order;
        j["order_ok"] = order >= 1.9;
        std::ostringstream text;
        text << "residual(h=" << b_h << ") = " << r1 << ", residual(h/2) = " << r2
             << ", order " << order << (order >= 1.9 ? " (ok)" : " (LOW)") << "\n";
        emit(j, out, format, text.str());
        return order >= 1.9 ? 0 : 1;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nd_violation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
