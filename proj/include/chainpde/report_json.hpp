#pragma once

// JSON serialization of the solver reports, plus a plain-text renderer
// for them.  Every top-level document carries a "kind" tag so tooling
// can dispatch without guessing.  Output is deliberately free of
// timestamps, hostnames, and other run-environment noise: two runs with
// the same inputs must produce byte-identical reports.

#include <string>

#include "json.hpp"

#include "chainpde/check.hpp"
#include "chainpde/elliptic.hpp"
#include "chainpde/fixedpoint.hpp"
#include "chainpde/oracle.hpp"
#include "chainpde/parabolic.hpp"
#include "chainpde/potential.hpp"

namespace chainpde {

nlohmann::json check_json(const CheckTriple& c);
nlohmann::json certificate_json(const UniquenessCertificate& c);

// kind = "potential"
nlohmann::json validation_report_json(const std::string& potential_name,
                                      const ValidationReport& r);

// kind = "elliptic"; bounds keyed "gradient" / "load" / "potential".
nlohmann::json elliptic_report_json(const EllipticReport& r);

// kind = "parabolic"; the per-step energy checks are folded to the
// worst step so report size stays independent of nt.
nlohmann::json parabolic_report_json(const ParabolicReport& r);

// kind = "solve".  Pass the multistart result when one was computed;
// contraction_q serializes as null when the run was too short.
nlohmann::json solve_report_json(const ProblemSpec& spec, const Solution& s,
                                 const MultistartResult* multi = nullptr);

// kind = "monolithic"
nlohmann::json monolithic_report_json(const ProblemSpec& spec,
                                      const Trajectory& traj,
                                      const MonolithicReport& r,
                                      TimeQuadrature quadrature);

// kind = "scalar"
nlohmann::json scalar_report_json(const ScalarSolution& s);

// Renders any of the documents above as a fixed-width text table.
// Throws ConfigError when the document has no recognizable "kind".
std::string render_report(const nlohmann::json& doc);

} // namespace chainpde
