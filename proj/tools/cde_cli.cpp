#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cde/classifier.hpp"
#include "cde/errors.hpp"
#include "cde/integrator.hpp"
#include "cde/io.hpp"
#include "cde/jumps.hpp"
#include "cde/kernels.hpp"
#include "cde/slowfast.hpp"
#include "cde/strata.hpp"

namespace fs = std::filesystem;
using namespace cde;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string spec;
  std::string family;
  std::vector<double> start;
  double horizon = -1.0;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  int samples = 200;
  std::string out = "out";
  std::uint64_t seed = 42;
  double x0 = 0.7;
  int grid = 0;
  std::string demo;
  std::map<std::string, double> tol;
};

// All tunables a run may consult; --tol.<name> overrides any of them.
struct Tolerances {
  IntegrationSettings integ;
  ClassifySettings classify;
  JumpSearchSettings jump;
  SlowFastSettings slowfast;
  double equilibria_box = 2.0;
  double strata_radius = 1.0;
  double jump_radius = 2.0;

  std::map<std::string, double*> table() {
    return {{"rel_tol", &integ.rel_tol},
            {"abs_tol", &integ.abs_tol},
            {"max_step", &integ.max_step},
            {"box", &integ.box},
            {"event_tol", &integ.event_tol},
            {"det_tol", &integ.det_tol},
            {"equilibrium_tol", &integ.equilibrium_tol},
            {"descent_rtol", &integ.descent.rtol},
            {"descent_atol", &integ.descent.atol},
            {"grad_tol", &integ.descent.grad_tol},
            {"descent_box", &integ.descent.box},
            {"classify_tol", &classify.tol},
            {"transversality_angle", &classify.transversality_angle},
            {"match_tol", &jump.match_tol},
            {"dedup_radius", &jump.dedup_radius},
            {"slowfast_rtol", &slowfast.rtol},
            {"slowfast_atol", &slowfast.atol},
            {"step_cap_factor", &slowfast.step_cap_factor},
            {"equilibria_box", &equilibria_box},
            {"strata_radius", &strata_radius},
            {"jump_radius", &jump_radius}};
  }

  void apply(const std::map<std::string, double>& o) {
    auto t = table();
    for (const auto& [k, v] : o) {
      auto it = t.find(k);
      if (it == t.end()) throw ArgumentError("unknown tolerance --tol." + k);
      *it->second = v;
    }
    jump.descent = integ.descent;
    integ.validate();
  }

  Json to_json() {
    Json j = Json::object();
    for (const auto& [k, p] : table()) j[k] = *p;
    return j;
  }
};

// Pull --tol.<name>[=value] pairs out of argv before CLI11 sees them.
std::vector<std::string> extract_tols(int argc, char** argv, std::map<std::string, double>& tol) {
  std::vector<std::string> rest;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.rfind("--tol.", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string key = a.substr(6), val;
    auto eq = key.find('=');
    if (eq != std::string::npos) {
      val = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else if (i + 1 < argc) {
      val = argv[++i];
    } else {
      throw ArgumentError("missing value for --tol." + key);
    }
    try {
      std::size_t pos = 0;
      double v = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument("trailing");
      tol[key] = v;
    } catch (const std::exception&) {
      throw ArgumentError("--tol." + key + ": not a number: " + val);
    }
  }
  return rest;
}

class Run {
 public:
  Run(std::string cmd, Options o, std::vector<std::string> argv)
      : cmd_(std::move(cmd)), o_(std::move(o)), argv_(std::move(argv)) {
    tol_.apply(o_.tol);
    tol_.classify.seed = o_.seed;
    fs::create_directories(o_.out);
    manifest_ = {{"command", cmd_},
                 {"argv", argv_},
                 {"version", kVersion},
                 {"seed", o_.seed},
                 {"threads", max_threads()},
                 {"outputs", Json::array()},
                 {"inputs", Json::object()}};
  }

  int dispatch() {
    if (cmd_ == "simulate") simulate(load());
    else if (cmd_ == "classify") classify(load());
    else if (cmd_ == "equilibria") equilibria(load());
    else if (cmd_ == "eps-compare") eps_compare(load());
    else if (cmd_ == "jump-search") jump_search();
    else if (cmd_ == "strata-sample") strata_sample();
    else if (cmd_ == "demo") demo();
    manifest_["tolerances"] = tol_.to_json();
    write_json("manifest.json", manifest_, false);
    return 0;
  }

 private:
  ResolvedSpec load(const std::string& name = "") {
    std::string src = name.empty() ? o_.spec : name;
    if (src.empty()) throw ArgumentError("--spec is required");
    BuiltinOptions bo;
    bo.heartbeat_x0 = o_.x0;
    ResolvedSpec r = resolve_spec(src, bo);
    manifest_["inputs"]["spec_source"] = src;
    manifest_["inputs"]["spec"] = spec_to_json(r.spec);
    if (src == "zeeman_heartbeat") manifest_["inputs"]["x0"] = o_.x0;
    return r;
  }

  TotalPoint start_of(const ResolvedSpec& r) {
    if (!o_.start.empty()) {
      ChartPoint c = Eigen::Map<const Vec>(o_.start.data(), static_cast<long>(o_.start.size()));
      if (c.size() != chart_dim(r.spec.family))
        throw ArgumentError("--start needs " + std::to_string(chart_dim(r.spec.family)) +
                            " chart coordinates");
      return lift_to_constraint(r.spec.family, c);
    }
    if (!r.start) throw ArgumentError("--start is required for this spec");
    return *r.start;
  }

  double horizon_of(const ResolvedSpec& r) const { return o_.horizon >= 0 ? o_.horizon : r.horizon; }

  std::ofstream open(const std::string& name) {
    fs::path p = fs::path(o_.out) / name;
    std::ofstream f(p);
    if (!f) throw ArgumentError("cannot write " + p.string());
    manifest_["outputs"].push_back(name);
    return f;
  }

  void write_json(const std::string& name, const Json& j, bool echo) {
    auto f = open(name);
    f << j.dump(2) << "\n";
    if (echo) std::cout << j.dump(2) << "\n";
  }

  void simulate(const ResolvedSpec& r) {
    TotalPoint st = start_of(r);
    IntegrationSettings is = tol_.integ;
    is.horizon = horizon_of(r);
    manifest_["inputs"]["start"] = point_to_json(st);
    manifest_["inputs"]["horizon"] = is.horizon;
    Trajectory tr = integrate_cde(r.spec, chart_of(r.spec.family, st), is);
    auto f = open("trajectory.csv");
    write_trajectory_csv(f, r.spec.family, tr);
    Json ev = events_to_json(tr.events);
    write_json("events.json", ev, false);
    std::cout << "segments=" << tr.segments.size() << " events=" << tr.events.size()
              << " last=" << event_name(tr.events.back().kind) << "\n";
  }

  void classify(const ResolvedSpec& r) {
    Classification c = classify_cde(r.spec, tol_.classify);
    write_json("classification.json", classification_to_json(c), true);
  }

  std::vector<EquilibriumInfo> equilibria(const ResolvedSpec& r, bool echo = true) {
    const int m = r.spec.family.slow_dim;
    int grid = o_.grid > 0 ? o_.grid : (m <= 2 ? 41 : 13);
    manifest_["inputs"]["grid"] = grid;
    Vec lo = Vec::Constant(m, -tol_.equilibria_box), hi = -lo;
    auto eq = find_equilibria(r.spec, lo, hi, grid);
    write_json("equilibria.json", equilibria_to_json(r.spec.family, eq), echo);
    return eq;
  }

  void eps_compare(const ResolvedSpec& r) {
    TotalPoint st = start_of(r);
    ConvergenceSettings cs;
    cs.cde = tol_.integ;
    cs.slowfast = tol_.slowfast;
    manifest_["inputs"]["epsilons"] = o_.epsilons;
    manifest_["inputs"]["start"] = point_to_json(st);
    manifest_["inputs"]["horizon"] = horizon_of(r);
    ErrorTable t = convergence_study(r.spec, st, horizon_of(r), o_.epsilons, cs);
    auto f = open("error_table.csv");
    write_error_table_csv(f, t);
    for (const auto& row : t.rows)
      std::cout << "epsilon=" << fmt17(row.epsilon) << " sup_slow_error=" << fmt17(row.sup_slow_error)
                << (row.note.empty() ? "" : " note=" + row.note) << "\n";
    std::cout << "monotone=" << (t.monotone() ? "true" : "false") << "\n";
  }

  CatastropheFamily family_opt() {
    if (o_.family.empty()) throw ArgumentError("--family is required");
    return CatastropheFamily::make(family_from_name(o_.family));
  }

  void jump_search() {
    CatastropheFamily fam = family_opt();
    manifest_["inputs"]["family"] = o_.family;
    manifest_["inputs"]["samples"] = o_.samples;
    if (o_.grid > 0) tol_.jump.grid = o_.grid;
    std::vector<TotalPoint> qs;
    if (!o_.start.empty()) {
      ChartPoint c = Eigen::Map<const Vec>(o_.start.data(), static_cast<long>(o_.start.size()));
      if (c.size() != chart_dim(fam)) throw ArgumentError("--start chart dimension mismatch");
      qs.push_back(lift_to_constraint(fam, c));
    } else {
      qs = sample_stratum(fam, StratumName::Fold, o_.samples, o_.seed, tol_.jump_radius);
    }
    auto reports = map_parallel<JumpSearchReport>(
        qs.size(), [&](std::size_t i) { return search_finite_jump(fam, qs[i], tol_.jump); });
    Json arr = Json::array();
    int admissible = 0, incomplete = 0;
    for (const auto& r : reports) {
      admissible += static_cast<int>(r.admissible.size());
      incomplete += r.complete ? 0 : 1;
      arr.push_back(jump_report_to_json(r));
    }
    Json j = {{"family", family_name(fam.tag)},
              {"queries", qs.size()},
              {"admissible_total", admissible},
              {"incomplete", incomplete},
              {"reports", arr}};
    write_json("jump_search.json", j, false);
    std::cout << "queries=" << qs.size() << " admissible_total=" << admissible
              << " incomplete=" << incomplete << "\n";
  }

  void strata_sample() {
    CatastropheFamily fam = family_opt();
    manifest_["inputs"]["family"] = o_.family;
    manifest_["inputs"]["samples"] = o_.samples;
    std::vector<std::pair<StratumLabel, TotalPoint>> rows;
    for (StratumName n : supported_strata(fam)) {
      StratumLabel l = make_stratum(fam, n);
      for (const auto& p : sample_stratum(fam, n, o_.samples, o_.seed, tol_.strata_radius))
        rows.emplace_back(l, p);
    }
    auto f = open("strata.csv");
    write_strata_csv(f, fam, rows);
    std::cout << "rows=" << rows.size() << "\n";
  }

  void demo() {
    if (o_.demo.empty()) throw ArgumentError("demo needs a model name");
    ResolvedSpec r = load(o_.demo);
    simulate(r);
    auto eq = equilibria(r, false);
    for (const auto& e : eq) {
      std::cout << "equilibrium " << e.kind << " at";
      for (double v : e.chart) std::cout << " " << fmt17(v);
      std::cout << "\n";
    }
    Classification c = classify_cde(r.spec, tol_.classify);
    write_json("classification.json", classification_to_json(c), false);
    std::cout << "label=" << label_name(c.label) << "\n";
    SlowFastSpec sf{r.spec, o_.epsilons.back()};
    SlowFastTrajectory tr = integrate_slowfast(sf, start_of(r), horizon_of(r), tol_.slowfast);
    auto f = open("slowfast.csv");
    write_slowfast_csv(f, r.spec.family, tr);
  }

  std::string cmd_;
  Options o_;
  std::vector<std::string> argv_;
  Tolerances tol_;
  Json manifest_;
};

}  // namespace

int main(int argc, char** argv) {
  Options o;
  std::vector<std::string> args;
  try {
    args = extract_tols(argc, argv, o.tol);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Constrained differential equations: simulation, desingularization, "
               "classification and jumps"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);
  auto common = [&](CLI::App* s, bool spec) {
    if (spec) s->add_option("--spec", o.spec, "Spec JSON path or builtin name");
    s->add_option("--out", o.out, "Output directory")->capture_default_str();
    s->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    s->add_option("--x0", o.x0, "Heartbeat threshold x0")->capture_default_str();
  };
  auto* sim = app.add_subcommand("simulate", "Integrate the CDE with jumps");
  common(sim, true);
  sim->add_option("--start", o.start, "Chart start coordinates")->delimiter(',');
  sim->add_option("--horizon", o.horizon, "Physical time horizon");
  auto* cls = app.add_subcommand("classify", "Classify the CDE near the origin");
  common(cls, true);
  auto* js = app.add_subcommand("jump-search", "Search finite jumps from fold points");
  common(js, false);
  js->add_option("--family", o.family, "Catastrophe family")->required();
  js->add_option("--samples", o.samples, "Number of sampled fold points")->capture_default_str();
  js->add_option("--start", o.start, "Single chart query point")->delimiter(',');
  js->add_option("--grid", o.grid, "Grid size for the 2-D fiber search");
  auto* eps = app.add_subcommand("eps-compare", "Slow-fast convergence study");
  common(eps, true);
  eps->add_option("--start", o.start, "Chart start coordinates")->delimiter(',');
  eps->add_option("--horizon", o.horizon, "Physical time horizon");
  eps->add_option("--epsilons", o.epsilons, "Decreasing epsilons")->delimiter(',');
  auto* st = app.add_subcommand("strata-sample", "Sample Thom-Boardman strata");
  common(st, false);
  st->add_option("--family", o.family, "Catastrophe family")->required();
  st->add_option("--samples", o.samples, "Samples per stratum")->capture_default_str();
  auto* eq = app.add_subcommand("equilibria", "Equilibria of the desingularized field");
  common(eq, true);
  eq->add_option("--grid", o.grid, "Seeds per axis");
  auto* dm = app.add_subcommand("demo", "Run a builtin model end to end");
  common(dm, false);
  dm->add_option("model", o.demo, "zeeman_heartbeat | zeeman_nerve | normal_form:<label>")
      ->required();
  dm->add_option("--horizon", o.horizon, "Physical time horizon");
  dm->add_option("--epsilons", o.epsilons, "Epsilon for the slow-fast run (last entry)")
      ->delimiter(',');

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Run run(cmd, o, std::vector<std::string>(argv, argv + argc));
    return run.dispatch();
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
