#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcurv/barycenter.hpp"
#include "qcurv/boundary_barycenter.hpp"
#include "qcurv/critical_points.hpp"
#include "qcurv/manifold_model.hpp"
#include "qcurv/morse_certifier.hpp"

namespace qcurv {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- tables

inline Json betti_to_json(const BettiTable& t) {
    Json j;
    if (t.is_empty_space()) {
        j["empty"] = true;
        return j;
    }
    j["reduced"] = t.is_reduced();
    Json ranks = Json::object();
    for (auto& [d, r] : t.ranks()) ranks[std::to_string(d)] = r;
    j["ranks"] = std::move(ranks);
    return j;
}

inline BettiTable betti_from_json(const Json& j) {
    if (j.contains("empty") && j["empty"].get<bool>()) return BettiTable::empty_space();
    if (!j.contains("reduced") || !j.contains("ranks"))
        throw data_error("betti table document needs 'reduced' and 'ranks'");
    BettiTable::rank_map m;
    for (auto& [key, val] : j["ranks"].items()) m[std::stoi(key)] = val.get<long long>();
    return j["reduced"].get<bool>() ? BettiTable::reduced(std::move(m))
                                    : BettiTable::unreduced(std::move(m));
}

/// Line-oriented text form: one `degree rank` pair per line.
inline std::string betti_to_lines(const BettiTable& t) {
    std::ostringstream os;
    for (auto& [d, r] : t.ranks()) os << d << ' ' << r << '\n';
    return os.str();
}

inline BettiTable betti_from_lines(const std::string& text, bool reduced) {
    BettiTable::rank_map m;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int d;
        long long r;
        if (!(ls >> d >> r)) throw data_error("betti text: expected 'degree rank' lines");
        m[d] += r;
    }
    return reduced ? BettiTable::reduced(std::move(m)) : BettiTable::unreduced(std::move(m));
}

// ------------------------------------------------------ barycenter tables

/// User table file: an array of space entries, each carrying its base
/// descriptor and the reduced tables per order.
inline std::map<std::string, BarycenterProvider> providers_from_json(const Json& doc) {
    if (!doc.is_array()) throw data_error("barycenter tables: top level must be an array");
    std::map<std::string, BarycenterProvider> out;
    for (const auto& entry : doc) {
        SpaceDescriptor base;
        base.name = entry.at("space").get<std::string>();
        base.dimension = entry.at("dimension").get<int>();
        base.euler = entry.at("euler").get<long long>();
        base.connectivity = entry.value("connectivity", -1);
        base.betti = betti_from_json(entry.at("betti"));
        std::map<int, BettiTable> tables;
        if (entry.contains("orders"))
            for (auto& [key, val] : entry["orders"].items())
                tables.emplace(std::stoi(key), betti_from_json(val));
        std::string name = base.name;
        out.emplace(std::move(name),
                    BarycenterProvider::from_tables(std::move(base), std::move(tables)));
    }
    return out;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw data_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

// ----------------------------------------------------------- model specs

inline ScalarField scalar_field_from_json(const Json& j) {
    if (j.contains("expr")) return ScalarField::expression(j["expr"].get<std::string>());
    if (j.contains("grid")) {
        Json g = load_json_file(j["grid"].get<std::string>());
        std::array<int, 4> dims;
        std::array<double, 4> origin, spacing;
        for (int d = 0; d < 4; ++d) {
            dims[d] = g.at("dims").at(d).get<int>();
            origin[d] = g.at("origin").at(d).get<double>();
            spacing[d] = g.at("spacing").at(d).get<double>();
        }
        return ScalarField::grid(
            GridField(dims, origin, spacing, g.at("values").get<std::vector<double>>()));
    }
    if (j.contains("const")) return ScalarField::constant(j["const"].get<double>());
    throw data_error("scalar field spec needs 'expr', 'grid', or 'const'");
}

/// Model spec document:
///   {type: "flat-slab" | "grid", box: {lo: [...], hi: [...]},
///    rho_floor, eta_floor, rho, green: "images" | "zero",
///    K: {expr|grid|const}, H: {pair_expr} | {field: {expr|grid|const}}}
/// "grid" is the flat-slab geometry with sampled fields; it only relaxes
/// downstream gradient tolerances.
inline SlabModel model_from_json(const Json& j) {
    SlabModel::Spec spec;
    std::string type = j.value("type", "flat-slab");
    if (type != "flat-slab" && type != "grid")
        throw data_error("model spec: unknown type '" + type + "'");
    spec.grid_based = type == "grid";
    if (j.contains("box")) {
        for (int d = 0; d < 4; ++d) {
            spec.box_lo[d] = j["box"].at("lo").at(d).get<double>();
            spec.box_hi[d] = j["box"].at("hi").at(d).get<double>();
        }
    }
    spec.rho_floor = j.value("rho_floor", spec.rho_floor);
    spec.eta_floor = j.value("eta_floor", spec.eta_floor);
    spec.rho = j.value("rho", spec.rho);
    if (j.contains("green")) {
        std::string g = j["green"].get<std::string>();
        if (g == "images") spec.green_images = true;
        else if (g == "zero") spec.green_images = false;
        else throw data_error("model spec: green must be 'images' or 'zero'");
    }
    if (j.contains("K")) spec.K = scalar_field_from_json(j["K"]);
    if (j.contains("H")) {
        const Json& h = j["H"];
        if (h.contains("pair_expr"))
            spec.H = PairField::pair_expression(h["pair_expr"].get<std::string>());
        else if (h.contains("field"))
            spec.H = PairField::symmetrized(scalar_field_from_json(h["field"]));
        else
            throw data_error("model spec: H needs 'pair_expr' or 'field'");
    }
    SlabModel model(std::move(spec));
    model.verify_invariants();
    return model;
}

// -------------------------------------------------------- crit summaries

inline Json summary_to_json(const CritSummary& s) {
    Json j;
    j["k"] = s.k;
    j["kbar"] = s.kbar;
    j["chi_M"] = s.chi_M;
    Json records = Json::array();
    for (const auto& r : s.points)
        records.push_back(Json{{"p", r.p}, {"q", r.q}, {"i_inf", r.i_inf},
                               {"lk_sign", r.lk_sign}});
    j["records"] = std::move(records);
    return j;
}

inline CritSummary summary_from_json(const Json& j) {
    CritSummary s;
    s.k = j.at("k").get<int>();
    s.kbar = j.value("kbar", 0);
    s.chi_M = j.value("chi_M", 0LL);
    for (const auto& r : j.at("records"))
        s.points.push_back(CritRecord{r.at("p").get<int>(), r.at("q").get<int>(),
                                      r.at("i_inf").get<int>(), r.at("lk_sign").get<int>()});
    s.validate();
    return s;
}

// --------------------------------------------------------------- reports

inline Json search_report_to_json(const SearchReport& rep, int p, int q,
                                  const SearchConfig& sc) {
    Json j;
    j["p"] = p;
    j["q"] = q;
    Json pts = Json::array();
    for (const auto& pt : rep.points) {
        Json e;
        e["p"] = p;
        e["q"] = q;
        Json ints = Json::array(), bnds = Json::array();
        for (const auto& a : pt.config.interior) ints.push_back({a[0], a[1], a[2], a[3]});
        for (const auto& b : pt.config.boundary) bnds.push_back({b[0], b[1], b[2]});
        e["interior"] = std::move(ints);
        e["boundary"] = std::move(bnds);
        e["f_value"] = pt.f_value;
        e["grad_norm"] = pt.grad_norm;
        e["morse_index"] = pt.morse_index;
        e["i_inf"] = pt.i_inf;
        e["lk_value"] = pt.lk_value;
        e["lk_sign"] = pt.lk_sign;
        e["energy"] = pt.energy;
        e["nd_ok"] = pt.nd_ok;
        if (pt.lk_q0_caveat) e["lk_q0_caveat"] = true;
        pts.push_back(std::move(e));
    }
    j["points"] = std::move(pts);
    j["converged_starts"] = rep.converged_starts;
    j["degenerate_warning"] = rep.degenerate_warning;
    if (!rep.diagnostic.empty()) j["diagnostic"] = rep.diagnostic;
    j["tolerances"] = Json{{"grad_tol", sc.grad_tol},
                           {"fd_hess_step", sc.fd_hess_step},
                           {"dedup_radius", sc.dedup_radius},
                           {"nd_floor", sc.nd_floor},
                           {"lk_floor", sc.lk_floor}};
    return j;
}

inline Json feasibility_to_json(const FeasibilityVerdict& v) {
    Json j;
    j["feasible"] = v.feasible;
    j["n"] = v.n;
    if (!v.feasible) {
        j["first_violation"] = v.first_violation;
        j["violation"] = v.violation;
    }
    if (v.c_tail_diagnostic)
        j["c_tail_diagnostic"] =
            "top c entry sits in the contested equation and changes the verdict";
    return j;
}

inline Json certify_report_to_json(const CertifyReport& rep) {
    Json j;
    j["k"] = rep.k;
    j["kbar"] = rep.kbar;
    j["counts"] = rep.counts.m;
    j["c_array"] = rep.c;
    j["system"] = feasibility_to_json(rep.system);
    j["hopf"] = Json{{"sum", rep.hopf.sum},
                     {"target", rep.hopf.target},
                     {"certified", rep.hopf.certified}};
    Json jumps = Json::array();
    for (const auto& jv : rep.jumps)
        jumps.push_back(Json{{"l", jv.l},
                             {"certified", jv.certified},
                             {"index_gap", jv.index_gap},
                             {"partial_sum", jv.partial_sum}});
    j["jump"] = std::move(jumps);
    if (rep.kbar_warning)
        j["kbar_warning"] =
            "kbar > 0: indices shifted; sublevel topology must come from the "
            "user-supplied c array";
    j["verdict"] = rep.certified() ? "EXISTENCE_CERTIFIED" : "INCONCLUSIVE";
    return j;
}

inline Json topology_report_to_json(int order, const BettiTable& betti, long long euler,
                                    bool consistent) {
    Json j;
    j["order"] = order;
    j["betti"] = betti_to_json(betti);
    j["euler"] = euler;
    j["consistency"] = consistent ? "pass" : "fail";
    return j;
}

/// Canonical serialized form: 2-space indent plus trailing newline.
/// Parsing and re-emitting reproduces the bytes exactly.
inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write file: " + path);
    out << content;
}

} // namespace qcurv
