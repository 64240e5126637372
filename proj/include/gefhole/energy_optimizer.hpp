#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gefhole/radial_measures.hpp"
#include "gefhole/test_function.hpp"

namespace gefhole {

enum class ConstraintKind {
  none,
  at_most_inside,  // nu(|z| < 1) <= p / alpha
  at_least_within  // nu(|z| <= 1) >= p / alpha
};

struct Constraint {
  ConstraintKind kind = ConstraintKind::none;
  double p = 0.0;

  static Constraint none() { return {}; }
  /// The natural constraint for p: deficit below 1, overcrowding above.
  static Constraint for_p(double p);
  std::string label() const;
};

/// Masses on circles of radius radii[i]; radii[0] = 0 and radius 1 is always a grid point.
struct ShellGrid {
  std::vector<double> radii;
  std::vector<double> masses;
  Constraint constraint;
  double alpha = 0.0;
  int unit_index = 0;  // radii[unit_index] == 1

  std::size_t size() const { return radii.size(); }
  double total_mass() const;
  double mass_inside_unit() const;  // |z| < 1
  double mass_within_unit() const;  // |z| <= 1
  /// Worst violation of the simplex and disk-mass constraints.
  double infeasibility() const;
  /// Half the minimal shell gap.
  double default_smoothing() const;
  /// Circle atoms; the shell at 0 becomes a circle of radius t.
  RadialMeasure to_measure(double t) const;
};

/// Shells at 0 = r_0 < ... < r_M = r_max, near-uniform spacing with 1 on the grid.
/// r_max <= 0 means sqrt(alpha). Masses start at the discretized equilibrium measure.
ShellGrid make_shell_grid(double alpha, int shells, Constraint c = {}, double r_max = 0.0);

struct DiscreteEval {
  double I;
  double B;
  double energy;
  double argmax;
};

DiscreteEval discrete_eval(const ShellGrid& g, double alpha, double smoothing_t);
double discrete_I(const ShellGrid& g, double alpha, double smoothing_t);

enum class Algorithm {
  accelerated,  // smoothed sup, accelerated projected gradient, temperature continuation
  subgradient   // projected subgradient with a / sqrt(k) steps
};

struct Budget {
  Algorithm algorithm = Algorithm::accelerated;
  int max_iterations = 40000;
  int iterations_per_stage = 4000;
  double tau_start = 1e-2;
  double tau_end = 1e-7;
  double step_scale = 0.01;  // a for the subgradient rule
  int trace_every = 50;
};

struct TracePoint {
  int iter;
  double I;
  double best_I;
  double infeasibility;
  double argmax_radius;
};

struct MinimizeResult {
  ShellGrid grid;  // best iterate
  std::vector<TracePoint> trace;
  double I = 0.0;
  double gap_estimate = 0.0;
  int iterations = 0;
  bool budget_exhausted = false;
};

struct GridSpec {
  int shells = 800;
  double r_max = 0.0;
};

MinimizeResult minimize(double alpha, Constraint c, GridSpec grid = {}, Budget budget = {});

struct VariationalReport {
  double max_violation = 0.0;  // positive means the inequality fails
  int worst_probe = -1;
};

/// Checks \int U_nu dmu - B(nu)/2 <= \int U_mu dmu - B(mu)/2 for every probe nu.
VariationalReport variational_check(const ShellGrid& candidate, const std::vector<ShellGrid>& probes, double alpha);
VariationalReport variational_check(const RadialMeasure& candidate, const std::vector<RadialMeasure>& probes,
                                    double alpha);

struct GapSides {
  double lhs;  // I(nu) - I(mu_min)
  double rhs;  // 2 pi x^2 / D(phi)
  double x;
  bool holds(double tol = 1e-9) const { return lhs >= rhs - tol; }
};

/// mu_min is the closed-form constrained minimizer for p.
GapSides convexity_gap_check(const RadialMeasure& nu, double p, double alpha, const TestFunction& phi,
                             double grid_h = 1.0 / 32);

/// Random feasible shell measure for property sweeps.
ShellGrid random_feasible_grid(double alpha, int shells, Constraint c, std::uint64_t seed);

}  // namespace gefhole
