#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cde/desingularization.hpp"
#include "cde/jumps.hpp"

namespace cde {

enum class EventKind { SingularCrossing, Jump, Equilibrium, DomainExit, HorizonReached };
const char* event_name(EventKind k);

struct Event {
  EventKind kind = EventKind::HorizonReached;
  double time = 0.0;
  TotalPoint at;
  std::optional<TotalPoint> to;
  std::string note;
};

struct Segment {
  std::vector<double> t;
  std::vector<ChartPoint> chart;
  std::vector<TotalPoint> lifted;
  std::vector<double> det;
  int orientation = 0;
};

struct Trajectory {
  std::vector<Segment> segments;
  std::vector<Event> events;
  double error_estimate = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
};

struct IntegrationSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.05;  // in the desingularized time
  double horizon = 10.0;   // in physical time
  double box = 3.0;        // chart domain [-box, box] per coordinate
  double event_tol = 1e-12;
  double det_tol = 1e-10;
  double equilibrium_tol = 1e-12;
  int equilibrium_steps = 3;
  long max_steps = 2000000;
  int max_jumps = 1000;
  DescentSettings descent;

  void validate() const;
};

int orientation_factor(const CatastropheFamily& fam, const ChartPoint& chart);

// Earliest root of g on (0, h] given g(0) > 0 >= g(h); Illinois with bisection
// fallback. Throws ContractError without a sign change.
double locate_root(const std::function<double(double)>& g, double h, double tol);

Trajectory integrate_cde(const CdeSpec& spec, const ChartPoint& start,
                         const IntegrationSettings& s = {});

}  // namespace cde
