#include "cde/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cde/errors.hpp"

namespace cde {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw ArgumentError("spec field '" + field + "': " + what);
}

void add_term_from_json(Polynomial& p, const Json& t, const std::string& f) {
  if (!t.is_object()) bad(f, "expected an object");
  if (!t.contains("coeff") || !t["coeff"].is_number()) bad(f + ".coeff", "expected a number");
  Exponents e{};
  if (t.contains("exponents")) {
    const Json& ex = t["exponents"];
    if (!ex.is_object()) bad(f + ".exponents", "expected an object");
    for (auto it = ex.begin(); it != ex.end(); ++it) {
      int v = var_from_name(it.key());
      if (v < 0) bad(f + ".exponents." + it.key(), "unknown variable");
      if (!it->is_number_integer() || it->get<int>() < 0)
        bad(f + ".exponents." + it.key(), "expected a non-negative integer");
      e[v] = it->get<int>();
    }
  }
  p.add_term(e, t["coeff"].get<double>());
}

Polynomial terms_from_json(const Json& arr, const std::string& field) {
  if (!arr.is_array()) bad(field, "expected an array of terms");
  Polynomial p;
  for (std::size_t i = 0; i < arr.size(); ++i)
    add_term_from_json(p, arr[i], field + "[" + std::to_string(i) + "]");
  p.prune();
  return p;
}

int slow_index(const CatastropheFamily& fam, const std::string& name, const std::string& field) {
  int v = var_from_name(name);
  if (v < kA || v - kA >= fam.slow_dim) bad(field, "'" + name + "' is not a slow parameter");
  return v - kA;
}

}  // namespace

CdeSpec spec_from_json(const Json& j) {
  if (!j.is_object()) bad("<root>", "expected an object");
  if (!j.contains("family") || !j["family"].is_string()) bad("family", "expected a string");
  FamilyTag tag;
  try {
    tag = family_from_name(j["family"].get<std::string>());
  } catch (const ArgumentError& e) {
    bad("family", e.what());
  }
  int slow_dim = -1, sign = 1;
  if (j.contains("slow_dim")) {
    if (!j["slow_dim"].is_number_integer()) bad("slow_dim", "expected an integer");
    slow_dim = j["slow_dim"].get<int>();
  }
  if (j.contains("potential_sign")) {
    if (!j["potential_sign"].is_number_integer()) bad("potential_sign", "expected +1 or -1");
    sign = j["potential_sign"].get<int>();
    if (sign != 1 && sign != -1) bad("potential_sign", "expected +1 or -1");
  }
  CdeSpec s;
  try {
    s.family = CatastropheFamily::make(tag, slow_dim, sign);
  } catch (const ArgumentError& e) {
    bad("slow_dim", e.what());
  }
  s.g.assign(s.family.slow_dim, Polynomial());
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  if (j.contains("degree_cap")) {
    if (!j["degree_cap"].is_number_integer()) bad("degree_cap", "expected an integer");
    s.degree_cap = j["degree_cap"].get<int>();
  }
  if (j.contains("g")) {
    const Json& g = j["g"];
    if (g.is_array()) {
      if (static_cast<int>(g.size()) != s.family.slow_dim)
        bad("g", "expected " + std::to_string(s.family.slow_dim) + " components");
      for (std::size_t i = 0; i < g.size(); ++i)
        s.g[i] = terms_from_json(g[i], "g[" + std::to_string(i) + "]");
    } else if (g.is_object()) {
      for (auto it = g.begin(); it != g.end(); ++it) {
        int k = slow_index(s.family, it.key(), "g." + it.key());
        s.g[k] = terms_from_json(*it, "g." + it.key());
      }
    } else {
      bad("g", "expected an array or object");
    }
  } else if (j.contains("terms")) {
    const Json& t = j["terms"];
    if (!t.is_array()) bad("terms", "expected an array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string f = "terms[" + std::to_string(i) + "]";
      if (!t[i].is_object() || !t[i].contains("component") || !t[i]["component"].is_string())
        bad(f + ".component", "expected a slow parameter name");
      int k = slow_index(s.family, t[i]["component"].get<std::string>(), f + ".component");
      add_term_from_json(s.g[k], t[i], f);
    }
    for (auto& p : s.g) p.prune();
  } else {
    bad("g", "missing");
  }
  try {
    s.validate();
  } catch (const ArgumentError& e) {
    bad("g", e.what());
  }
  return s;
}

Json polynomial_to_json(const Polynomial& p) {
  Json arr = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json ex = Json::object();
    for (int v = 0; v < kNumVars; ++v)
      if (e[v] != 0) ex[var_name(v)] = e[v];
    arr.push_back({{"exponents", ex}, {"coeff", c}});
  }
  return arr;
}

Json spec_to_json(const CdeSpec& spec) {
  Json g = Json::array();
  for (const auto& p : spec.g) g.push_back(polynomial_to_json(p));
  return {{"family", family_name(spec.family.tag)},
          {"slow_dim", spec.family.slow_dim},
          {"potential_sign", spec.family.sign},
          {"name", spec.name},
          {"degree_cap", spec.degree_cap},
          {"g", g}};
}

ChartPoint default_normal_form_start(FamilyTag tag) {
  ChartPoint c(3);
  switch (tag) {
    case FamilyTag::Morse: c << 0.5, 0.2, 0.1; break;
    case FamilyTag::Fold: c << 1.0, 0.2, 0.1; break;
    case FamilyTag::Cusp: c << 1.0, -1.0, 0.0; break;
    case FamilyTag::Swallowtail: c << 1.0, 0.5, 0.0; break;
    case FamilyTag::HyperbolicUmbilic: c << 1.0, 1.0, 0.5; break;
    case FamilyTag::EllipticUmbilic: c << 0.05, 0.05, 0.6; break;
    default: throw ArgumentError("no default start for family " + family_name(tag));
  }
  return c;
}

ResolvedSpec resolve_spec(const std::string& src, const BuiltinOptions& o) {
  ResolvedSpec r;
  r.source = src;
  if (src == "zeeman_heartbeat" || src == "zeeman_nerve") {
    BuiltinModel m = src == "zeeman_nerve" ? zeeman_nerve() : zeeman_heartbeat(o.heartbeat_x0);
    r.spec = m.spec;
    r.start = m.start;
    r.horizon = m.horizon;
    return r;
  }
  const std::string prefix = "normal_form:";
  if (src.rfind(prefix, 0) == 0) {
    NormalFormLabel l = parse_label(src.substr(prefix.size()));
    r.spec = normal_form_instance(l, o.normal_form);
    r.start = lift_to_constraint(r.spec.family, default_normal_form_start(l.family));
    return r;
  }
  std::ifstream in(src);
  if (!in) throw ArgumentError("cannot read spec '" + src + "' (not a builtin or readable file)");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ArgumentError("spec '" + src + "' is not valid JSON: " + e.what());
  }
  r.spec = spec_from_json(j);
  if (j.contains("start")) {
    const Json& st = j["start"];
    if (!st.is_array()) bad("start", "expected an array of chart coordinates");
    ChartPoint c(static_cast<long>(st.size()));
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (!st[i].is_number()) bad("start", "expected numbers");
      c[static_cast<long>(i)] = st[i].get<double>();
    }
    if (c.size() != chart_dim(r.spec.family)) bad("start", "chart dimension mismatch");
    r.start = lift_to_constraint(r.spec.family, c);
  }
  if (j.contains("horizon")) {
    if (!j["horizon"].is_number()) bad("horizon", "expected a number");
    r.horizon = j["horizon"].get<double>();
  }
  return r;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}
}  // namespace

Json point_to_json(const TotalPoint& p) {
  return {{"fast", vec_json(p.fast)}, {"slow", vec_json(p.slow)}};
}

Json events_to_json(const std::vector<Event>& ev) {
  Json a = Json::array();
  for (const Event& e : ev) {
    Json j = {{"kind", event_name(e.kind)}, {"time", e.time}, {"at", point_to_json(e.at)}};
    if (e.to) j["to"] = point_to_json(*e.to);
    if (!e.note.empty()) j["note"] = e.note;
    a.push_back(j);
  }
  return a;
}

Json equilibria_to_json(const CatastropheFamily& fam, const std::vector<EquilibriumInfo>& eq) {
  Json a = Json::array();
  const auto names = chart_names(fam);
  for (const auto& e : eq) {
    Json pt = Json::object();
    for (int i = 0; i < e.chart.size(); ++i) pt[names[i]] = e.chart[i];
    Json eig = Json::array();
    for (auto z : e.eigenvalues) eig.push_back({z.real(), z.imag()});
    a.push_back({{"chart", pt},
                 {"on_singular", e.on_singular},
                 {"residual", e.residual},
                 {"kind", e.kind},
                 {"eigenvalues", eig}});
  }
  return a;
}

Json classification_to_json(const Classification& c) {
  const GenericityReport& r = c.report;
  Json eig = Json::array();
  for (auto z : r.spectrum.eigenvalues) eig.push_back({z.real(), z.imag()});
  return {{"label", label_name(c.label)},
          {"generic", r.generic},
          {"notes", r.notes},
          {"spectrum", eig},
          {"transversality_samples", r.transversality_samples},
          {"transversal_fraction", r.transversal_fraction},
          {"folded_equilibria", r.folded.size()}};
}

Json jump_report_to_json(const JumpSearchReport& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates)
    cands.push_back({{"point", point_to_json(c.point)},
                     {"attracting", attracting_name(c.membership.attracting)},
                     {"is_query", c.is_query},
                     {"reached_by_descent", c.reached_by_descent},
                     {"admissible", c.admissible},
                     {"reason", c.reason}});
  Json adm = Json::array();
  for (const auto& p : r.admissible) adm.push_back(point_to_json(p));
  Json j = {{"query", point_to_json(r.query)},
            {"candidates", cands},
            {"admissible", adm},
            {"descent", landing_name(r.descent.outcome)},
            {"complete", r.complete},
            {"diagnostics", r.diagnostics}};
  if (r.grid_count >= 0) j["grid_count"] = r.grid_count;
  if (r.resultant_count >= 0) j["resultant_count"] = r.resultant_count;
  return j;
}

void write_trajectory_csv(std::ostream& os, const CatastropheFamily& fam, const Trajectory& tr) {
  const auto names = total_names(fam);
  os << "segment,t";
  for (const auto& n : names) os << "," << n;
  os << ",det\n";
  for (std::size_t s = 0; s < tr.segments.size(); ++s) {
    const Segment& seg = tr.segments[s];
    for (std::size_t i = 0; i < seg.t.size(); ++i) {
      os << s << "," << fmt17(seg.t[i]);
      for (double v : seg.lifted[i].fast) os << "," << fmt17(v);
      for (double v : seg.lifted[i].slow) os << "," << fmt17(v);
      os << "," << fmt17(seg.det[i]) << "\n";
    }
  }
}

void write_slowfast_csv(std::ostream& os, const CatastropheFamily& fam,
                        const SlowFastTrajectory& tr) {
  const auto names = total_names(fam);
  os << "t";
  for (const auto& n : names) os << "," << n;
  os << "\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    os << fmt17(tr.t[i]);
    for (double v : tr.state[i].fast) os << "," << fmt17(v);
    for (double v : tr.state[i].slow) os << "," << fmt17(v);
    os << "\n";
  }
}

void write_error_table_csv(std::ostream& os, const ErrorTable& t) {
  os << "epsilon,sup_slow_error,runtime_ms,excluded_windows\n";
  for (const auto& r : t.rows) {
    os << fmt17(r.epsilon) << "," << fmt17(r.sup_slow_error) << "," << fmt17(r.runtime_ms) << ",";
    for (std::size_t i = 0; i < r.excluded_windows.size(); ++i)
      os << (i ? ";" : "") << "[" << fmt17(r.excluded_windows[i].first) << " "
         << fmt17(r.excluded_windows[i].second) << "]";
    os << "\n";
  }
}

void write_strata_csv(std::ostream& os, const CatastropheFamily& fam,
                      const std::vector<std::pair<StratumLabel, TotalPoint>>& pts) {
  const auto names = total_names(fam);
  os << "stratum,symbol";
  for (const auto& n : names) os << "," << n;
  os << "\n";
  for (const auto& [l, p] : pts) {
    os << stratum_name(l.name) << ",\"" << symbol_string(l.symbol) << "\"";
    for (double v : p.fast) os << "," << fmt17(v);
    for (double v : p.slow) os << "," << fmt17(v);
    os << "\n";
  }
}

}  // namespace cde
