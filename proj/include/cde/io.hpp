#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "cde/classifier.hpp"
#include "cde/integrator.hpp"
#include "cde/jumps.hpp"
#include "cde/slowfast.hpp"
#include "cde/strata.hpp"

namespace cde {

using Json = nlohmann::json;

// Spec JSON:
// {"family": "cusp", "slow_dim": 2, "potential_sign": 1, "name": "...",
//  "g": [[{"exponents": {"x": 1}, "coeff": 1.0}, ...], ...]}
// "g" may instead be an object keyed by slow parameter name, or the terms may
// be given flat as "terms": [{"component": "b", "exponents": {...}, "coeff": ...}].
CdeSpec spec_from_json(const Json& j);  // throws ArgumentError naming the field
Json spec_to_json(const CdeSpec& spec);
Json polynomial_to_json(const Polynomial& p);

struct BuiltinOptions {
  double heartbeat_x0 = 0.7;
  NormalFormParams normal_form;
};

struct ResolvedSpec {
  CdeSpec spec;
  std::optional<TotalPoint> start;  // default start when the source provides one
  double horizon = 10.0;
  std::string source;
};

// Builtin name ("zeeman_heartbeat", "zeeman_nerve", "normal_form:<label>")
// or a path to a spec JSON file.
ResolvedSpec resolve_spec(const std::string& name_or_path, const BuiltinOptions& o = {});

// Default chart start on S_V,min for a normal-form family.
ChartPoint default_normal_form_start(FamilyTag tag);

std::string fmt17(double v);  // %.17g

Json point_to_json(const TotalPoint& p);
Json events_to_json(const std::vector<Event>& ev);
Json classification_to_json(const Classification& c);
Json equilibria_to_json(const CatastropheFamily& fam, const std::vector<EquilibriumInfo>& eq);
Json jump_report_to_json(const JumpSearchReport& r);

void write_trajectory_csv(std::ostream& os, const CatastropheFamily& fam, const Trajectory& tr);
void write_slowfast_csv(std::ostream& os, const CatastropheFamily& fam,
                        const SlowFastTrajectory& tr);
void write_error_table_csv(std::ostream& os, const ErrorTable& t);
void write_strata_csv(std::ostream& os, const CatastropheFamily& fam,
                      const std::vector<std::pair<StratumLabel, TotalPoint>>& pts);

}  // namespace cde
