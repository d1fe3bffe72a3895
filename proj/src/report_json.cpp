#include "chainpde/report_json.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "chainpde/errors.hpp"

namespace chainpde {

namespace {

using nlohmann::json;

const char* quadrature_name(TimeQuadrature q) {
    return q == TimeQuadrature::rectangle_right ? "rectangle_right"
                                                : "rectangle_left";
}

json problem_json(const ProblemSpec& spec) {
    json j;
    j["dim"] = spec.grid->dim();
    json nodes = json::array();
    json extents = json::array();
    for (int a = 0; a < spec.grid->dim(); ++a) {
        nodes.push_back(spec.grid->nodes(a));
        extents.push_back(spec.grid->extent(a));
    }
    j["nodes"] = nodes;
    j["extents"] = extents;
    j["max_spacing"] = spec.grid->max_spacing();
    j["potential"] = spec.potential.name();
    j["T"] = spec.total_time;
    j["nt"] = spec.time_steps;
    j["u0_norm_l2"] = norm_l2(spec.u0);
    j["u0_norm_inf"] = norm_inf(spec.u0);
    return j;
}

// Worst step of a per-step check sequence: the one with the largest
// lhs - rhs margin (ties keep the earliest).
size_t worst_index(const std::vector<CheckTriple>& v) {
    size_t w = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i].lhs - v[i].rhs > v[w].lhs - v[w].rhs) w = i;
    return w;
}

json parabolic_body(const ParabolicReport& r) {
    json j;
    j["energy_steps"] = static_cast<int>(r.energy.size());
    if (!r.energy.empty()) {
        const size_t w = worst_index(r.energy);
        j["energy_worst_step"] = static_cast<int>(w) + 1;
        j["energy_worst"] = check_json(r.energy[w]);
    } else {
        j["energy_worst_step"] = nullptr;
        j["energy_worst"] = nullptr;
    }
    j["energy_pass"] = r.energy_pass;
    j["max_principle"] = check_json(r.max_principle);
    j["all_pass"] = r.all_pass();
    return j;
}

json elliptic_body(const EllipticReport& r) {
    json j;
    j["iterations"] = r.iterations;
    j["final_residual"] = r.final_residual;
    j["apriori"] = {{"gradient", check_json(r.apriori[0])},
                    {"load", check_json(r.apriori[1])},
                    {"potential", check_json(r.apriori[2])}};
    j["all_pass"] = r.all_pass();
    return j;
}

// ---- text rendering ----------------------------------------------------

std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string pad_left(const std::string& s, size_t w) {
    return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string scalar_row(const std::string& label, const std::string& value) {
    return "  " + pad_right(label, 24) + value + "\n";
}

std::string num_row(const std::string& label, const json& v) {
    if (v.is_null()) return scalar_row(label, "n/a");
    if (v.is_boolean()) return scalar_row(label, v.get<bool>() ? "yes" : "no");
    if (v.is_string()) return scalar_row(label, v.get<std::string>());
    return scalar_row(label, fmt_num(v.get<double>()));
}

std::string check_header() {
    return pad_right("check", 31) + pad_left("lhs", 14) + pad_left("rhs", 14) +
           pad_left("status", 8) + "\n";
}

std::string check_row(const std::string& name, const json& c) {
    if (c.is_null())
        return pad_right(name, 31) + pad_left("n/a", 14) + pad_left("n/a", 14) +
               pad_left("-", 8) + "\n";
    return pad_right(name, 31) + pad_left(fmt_num(c.at("lhs").get<double>()), 14) +
           pad_left(fmt_num(c.at("rhs").get<double>()), 14) +
           pad_left(c.at("pass").get<bool>() ? "pass" : "FAIL", 8) + "\n";
}

std::string render_problem(const json& p) {
    std::string out = "problem\n";
    std::string nodes, extents;
    for (const auto& n : p.at("nodes")) nodes += (nodes.empty() ? "" : " x ") +
                                                 std::to_string(n.get<int>());
    for (const auto& e : p.at("extents"))
        extents += (extents.empty() ? "" : " x ") + fmt_num(e.get<double>());
    out += scalar_row("nodes", nodes);
    out += scalar_row("extents", extents);
    out += num_row("potential", p.at("potential"));
    out += num_row("T", p.at("T"));
    out += scalar_row("nt", std::to_string(p.at("nt").get<int>()));
    out += num_row("u0_norm_inf", p.at("u0_norm_inf"));
    return out;
}

std::string render_certificate(const json& c) {
    std::string out = "uniqueness certificate\n";
    out += num_row("sup_u0 (K)", c.at("sup_u0"));
    out += num_row("max_slope (M)", c.at("max_slope"));
    out += num_row("time_horizon (T)", c.at("time_horizon"));
    out += num_row("product (M K T^2)", c.at("product"));
    out += num_row("certified", c.at("certified"));
    return out;
}

std::string render_elliptic_block(const json& e, const std::string& prefix) {
    std::string out;
    out += check_row(prefix + "gradient", e.at("apriori").at("gradient"));
    out += check_row(prefix + "load", e.at("apriori").at("load"));
    out += check_row(prefix + "potential", e.at("apriori").at("potential"));
    return out;
}

std::string render_parabolic_block(const json& p, const std::string& prefix) {
    std::string out;
    out += check_row(prefix + "energy (worst step)", p.at("energy_worst"));
    out += check_row(prefix + "max_principle", p.at("max_principle"));
    return out;
}

std::string render_solve(const json& doc) {
    std::string out = "solve report\n\n";
    out += render_problem(doc.at("problem")) + "\n";

    out += "outer iteration\n";
    out += num_row("converged", doc.at("converged"));
    out += scalar_row("iterations", std::to_string(doc.at("iterations").get<int>()));
    out += num_row("contraction_q", doc.at("contraction_q"));
    out += num_row("terminal_norm_l2", doc.at("terminal_norm_l2"));
    out += num_row("aggregate_norm_l2", doc.at("aggregate_norm_l2"));
    out += num_row("aggregate_constant", doc.at("checks").at("aggregate_constant"));
    out += "\n" + render_certificate(doc.at("certificate")) + "\n";

    const json& checks = doc.at("checks");
    out += check_header();
    out += check_row("self_map", checks.at("self_map"));
    out += check_row("aggregate", checks.at("aggregate"));
    out += check_row("scheme_residual", checks.at("scheme_residual"));
    out += render_elliptic_block(checks.at("elliptic"), "elliptic: ");
    out += render_parabolic_block(checks.at("parabolic"), "parabolic: ");
    out += num_row("all_checks_pass", doc.at("all_checks_pass"));

    if (doc.contains("multistart") && !doc.at("multistart").is_null()) {
        const json& m = doc.at("multistart");
        out += "\nmultistart\n";
        out += scalar_row("starts", std::to_string(m.at("starts").get<int>()));
        out += scalar_row("converged_count",
                          std::to_string(m.at("converged_count").get<int>()));
        out += num_row("dispersion", m.at("dispersion"));
        out += pad_left("start", 7) + pad_left("initial_norm", 16) +
               pad_left("converged", 12) + pad_left("iterations", 12) + "\n";
        for (const auto& r : m.at("runs"))
            out += pad_left(std::to_string(r.at("start_index").get<int>()), 7) +
                   pad_left(fmt_num(r.at("initial_norm").get<double>()), 16) +
                   pad_left(r.at("converged").get<bool>() ? "yes" : "no", 12) +
                   pad_left(std::to_string(r.at("iterations").get<int>()), 12) +
                   "\n";
    }

    out += "\niteration history\n";
    out += pad_left("iter", 6) + pad_left("step", 16) + "\n";
    int k = 1;
    for (const auto& d : doc.at("history"))
        out += pad_left(std::to_string(k++), 6) +
               pad_left(fmt_num(d.get<double>()), 16) + "\n";
    return out;
}

std::string render_elliptic(const json& doc) {
    std::string out = "elliptic report\n";
    out += scalar_row("iterations", std::to_string(doc.at("iterations").get<int>()));
    out += num_row("final_residual", doc.at("final_residual"));
    out += "\n" + check_header();
    out += render_elliptic_block(doc, "");
    out += num_row("all_pass", doc.at("all_pass"));
    return out;
}

std::string render_parabolic(const json& doc) {
    std::string out = "parabolic report\n";
    out += scalar_row("energy_steps",
                      std::to_string(doc.at("energy_steps").get<int>()));
    out += "\n" + check_header();
    out += render_parabolic_block(doc, "");
    out += num_row("all_pass", doc.at("all_pass"));
    return out;
}

std::string render_potential(const json& doc) {
    std::string out = "potential validation\n";
    out += num_row("name", doc.at("name"));
    out += num_row("interval_lo", doc.at("interval_lo"));
    out += num_row("interval_hi", doc.at("interval_hi"));
    out += scalar_row("samples", std::to_string(doc.at("samples").get<int>()));
    out += num_row("min_phi", doc.at("min_phi"));
    out += num_row("min_eta_prime", doc.at("min_eta_prime"));
    out += num_row("max_abs_dphi", doc.at("max_abs_dphi"));
    out += num_row("phi_at_zero", doc.at("phi_at_zero"));
    out += num_row("phi_nonneg", doc.at("phi_nonneg"));
    out += num_row("eta_prime_nonneg", doc.at("eta_prime_nonneg"));
    out += num_row("passed", doc.at("passed"));
    return out;
}

std::string render_monolithic(const json& doc) {
    std::string out = "monolithic oracle report\n\n";
    out += render_problem(doc.at("problem")) + "\n";
    out += num_row("quadrature", doc.at("quadrature"));
    out += scalar_row("iterations", std::to_string(doc.at("iterations").get<int>()));
    out += num_row("final_residual", doc.at("final_residual"));
    out += num_row("terminal_norm_l2", doc.at("terminal_norm_l2"));
    return out;
}

std::string render_scalar(const json& doc) {
    std::string out = "scalar oracle report\n";
    out += num_row("u0", doc.at("u0"));
    out += num_row("total_time", doc.at("total_time"));
    out += num_row("aggregate", doc.at("aggregate"));
    out += num_row("rate", doc.at("rate"));
    out += num_row("terminal", doc.at("terminal"));
    out += num_row("residual", doc.at("residual"));
    return out;
}

std::string render_certificate_doc(const json& doc) {
    std::string out = render_certificate(doc);
    return out;
}

} // namespace

json check_json(const CheckTriple& c) {
    return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}};
}

json certificate_json(const UniquenessCertificate& c) {
    return {{"kind", "certificate"},
            {"sup_u0", c.sup_u0},
            {"max_slope", c.max_slope},
            {"time_horizon", c.time_horizon},
            {"product", c.product},
            {"certified", c.certified}};
}

json validation_report_json(const std::string& potential_name,
                            const ValidationReport& r) {
    json j;
    j["kind"] = "potential";
    j["name"] = potential_name;
    j["interval_lo"] = r.interval_lo;
    j["interval_hi"] = r.interval_hi;
    j["samples"] = r.samples;
    j["min_phi"] = r.min_phi;
    j["min_eta_prime"] = r.min_eta_prime;
    j["max_abs_eta_prime"] = r.max_abs_eta_prime;
    j["max_abs_dphi"] = r.max_abs_dphi;
    j["phi_at_zero"] = r.phi_at_zero;
    j["phi_nonneg"] = r.phi_nonneg;
    j["eta_prime_nonneg"] = r.eta_prime_nonneg;
    j["passed"] = r.passed();
    return j;
}

json elliptic_report_json(const EllipticReport& r) {
    json j = elliptic_body(r);
    j["kind"] = "elliptic";
    return j;
}

json parabolic_report_json(const ParabolicReport& r) {
    json j = parabolic_body(r);
    j["kind"] = "parabolic";
    return j;
}

json solve_report_json(const ProblemSpec& spec, const Solution& s,
                       const MultistartResult* multi) {
    json j;
    j["kind"] = "solve";
    j["problem"] = problem_json(spec);
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    j["history"] = s.history;
    j["contraction_q"] =
        s.contraction_q ? json(*s.contraction_q) : json(nullptr);
    j["terminal_norm_l2"] = norm_l2(s.w_star);
    j["terminal_norm_inf"] = norm_inf(s.w_star);
    j["aggregate_norm_l2"] = norm_l2(s.v);
    j["certificate"] = certificate_json(s.certificate);
    j["certificate"].erase("kind");

    json checks;
    checks["self_map"] = check_json(s.self_map);
    checks["aggregate"] = check_json(s.aggregate);
    checks["aggregate_constant"] = s.aggregate_constant;
    checks["scheme_residual"] = check_json(s.scheme_residual);
    checks["elliptic"] = elliptic_body(s.elliptic_report);
    checks["parabolic"] = parabolic_body(s.parabolic_report);
    j["checks"] = checks;
    j["all_checks_pass"] = s.all_checks_pass();

    if (multi != nullptr) {
        json m;
        m["starts"] = static_cast<int>(multi->runs.size());
        m["converged_count"] = multi->converged_count;
        m["dispersion"] = multi->dispersion;
        json runs = json::array();
        for (const auto& r : multi->runs)
            runs.push_back({{"start_index", r.start_index},
                            {"initial_norm", r.initial_norm},
                            {"converged", r.solution.converged},
                            {"iterations", r.solution.iterations}});
        m["runs"] = runs;
        j["multistart"] = m;
    } else {
        j["multistart"] = nullptr;
    }
    return j;
}

json monolithic_report_json(const ProblemSpec& spec, const Trajectory& traj,
                            const MonolithicReport& r,
                            TimeQuadrature quadrature) {
    json j;
    j["kind"] = "monolithic";
    j["problem"] = problem_json(spec);
    j["quadrature"] = quadrature_name(quadrature);
    j["iterations"] = r.iterations;
    j["final_residual"] = r.final_residual;
    j["terminal_norm_l2"] = norm_l2(traj.terminal());
    j["terminal_norm_inf"] = norm_inf(traj.terminal());
    return j;
}

json scalar_report_json(const ScalarSolution& s) {
    json j;
    j["kind"] = "scalar";
    j["u0"] = s.u0;
    j["total_time"] = s.total_time;
    j["aggregate"] = s.aggregate;
    j["rate"] = s.rate;
    j["residual"] = s.residual;
    j["terminal"] = s.terminal();
    return j;
}

std::string render_report(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string())
        throw ConfigError("report: document has no \"kind\" tag");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "solve") return render_solve(doc);
    if (kind == "elliptic") return render_elliptic(doc);
    if (kind == "parabolic") return render_parabolic(doc);
    if (kind == "potential") return render_potential(doc);
    if (kind == "monolithic") return render_monolithic(doc);
    if (kind == "scalar") return render_scalar(doc);
    if (kind == "certificate") return render_certificate_doc(doc);
    throw ConfigError("report: unknown kind '" + kind + "'");
}

} // namespace chainpde
