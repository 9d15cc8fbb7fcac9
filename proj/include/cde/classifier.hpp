#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cde/desingularization.hpp"

namespace cde {

enum class Variant {
  FlowBox,
  Source,
  Saddle1,
  Saddle2,
  Sink,
  FlowBox1,
  FlowBox2,
  Saddle,
  DualFlowBox,
  CenterSaddle,
  Center,
  NotGeneric,
};

// family is Morse for the regular rows.
struct NormalFormLabel {
  FamilyTag family = FamilyTag::Morse;
  Variant variant = Variant::FlowBox;
  bool operator==(const NormalFormLabel&) const = default;
};

std::string label_name(const NormalFormLabel& l);  // e.g. "fold/saddle"
NormalFormLabel parse_label(const std::string& s);  // throws ArgumentError
std::vector<NormalFormLabel> all_normal_form_labels();  // the 16 rows

using SeriesCoeffs = std::map<std::pair<int, int>, double>;

struct NormalFormParams {
  int rho = +1;         // fold tail
  double delta = 0.1;
  int k = 3;            // center-case truncation order
  int sign_choice = +1; // the +- in Phi and A
  SeriesCoeffs rho_lj, eta_lj, sigma_lj;  // missing entries default to 1
  void validate() const;
};

CdeSpec normal_form_instance(const NormalFormLabel& label, const NormalFormParams& p = {});

// Two-parameter fold normal forms (slow_dim 2), used for the b = c reduction.
CdeSpec takens_fold_instance(Variant v);

// Jacobian of the desingularized field at the chart origin (central
// differences with a Richardson step).
Mat linearize_origin(const CdeSpec& spec, double h = 1e-6);
Mat linearize_at(const CdeSpec& spec, const ChartPoint& z, double h = 1e-6);

struct SpectrumClass {
  std::vector<std::complex<double>> eigenvalues;
  int n_zero = 0;
  int n_pos = 0;
  int n_neg = 0;
  int n_imag_pair = 0;
};

inline constexpr double kSpectrumTol = 1e-7;
SpectrumClass classify_spectrum(const Mat& m, double tol = kSpectrumTol);

// Linear part of X-bar / det at the origin for umbilic fields vanishing at
// the origin, fitted from central differences along fixed directions.
struct ReducedLinearization {
  Mat linear;
  double residual = 0.0;
};
ReducedLinearization reduced_linearization(const CdeSpec& spec, double h = 1e-3);

struct EquilibriumInfo {
  ChartPoint chart;
  bool on_singular = false;
  double residual = 0.0;
  std::vector<std::complex<double>> eigenvalues;
  std::string kind;  // "regular", "folded_saddle", "folded_node", ...
};

std::vector<EquilibriumInfo> find_equilibria(const CdeSpec& spec, const Vec& lo, const Vec& hi,
                                             int grid, bool parallel = true);

struct GenericityReport {
  bool generic = true;
  std::vector<std::string> notes;
  SpectrumClass spectrum;
  int transversality_samples = 0;
  double transversal_fraction = 1.0;
  std::vector<EquilibriumInfo> folded;
};

struct ClassifySettings {
  double tol = 1e-9;
  int transversality_samples = 50;
  double transversality_angle = 1e-3;
  std::uint64_t seed = 42;
  bool scan_folded = true;
};

struct Classification {
  NormalFormLabel label;
  GenericityReport report;
};

Classification classify_cde(const CdeSpec& spec, const ClassifySettings& s = {});

}  // namespace cde
