#pragma once

#include <map>
#include <string>
#include <vector>

#include "gefhole/test_function.hpp"

namespace gefhole {

/// Uniform measure of total `mass` on the circle |z| = radius.
struct CircleAtom {
  double radius;
  double mass;
};

/// Density c dm / pi on lo <= |z| <= hi, so the annulus carries c (hi^2 - lo^2).
struct Annulus {
  double lo;
  double hi;
  double c;

  double mass() const { return c * (hi * hi - lo * lo); }
};

class RadialMeasure {
 public:
  RadialMeasure() = default;
  RadialMeasure(std::vector<CircleAtom> atoms, std::vector<Annulus> annuli);

  const std::vector<CircleAtom>& atoms() const { return atoms_; }
  const std::vector<Annulus>& annuli() const { return annuli_; }

  double total_mass() const { return total_mass_; }
  bool is_probability() const;
  /// nu(closed disk of radius s)
  double mass_within(double s) const;
  /// nu(open disk of radius s)
  double mass_inside(double s) const;
  /// \int |w|^2 dnu
  double second_moment() const;
  double support_radius() const;
  RadialMeasure scaled(double factor) const;

 private:
  std::vector<CircleAtom> atoms_;
  std::vector<Annulus> annuli_;
  double total_mass_ = 0.0;
};

/// nu1 + nu2 with masses weighted by w1, w2.
RadialMeasure mix(const RadialMeasure& a, double wa, const RadialMeasure& b, double wb);

double log_potential(const RadialMeasure& nu, double s);
/// \int U_a d b
double mutual_energy(const RadialMeasure& a, const RadialMeasure& b);
double log_energy(const RadialMeasure& nu);
/// Sigma(nu - mu) = Sigma(nu) - 2 \int U_nu dmu + Sigma(mu)
double signed_energy(const RadialMeasure& nu, const RadialMeasure& mu);

struct SupResult {
  double value;   // 2 sup (U(s) - s^2 / 2 alpha)
  double argmax;  // smallest maximizing radius
};

/// B_alpha with the sup restricted to [0, sqrt(alpha)].
SupResult b_alpha(const RadialMeasure& nu, double alpha);
/// Same sup taken over [0, s_max].
SupResult b_alpha_on(const RadialMeasure& nu, double alpha, double s_max);

/// g_nu(s) = U(s) - s^2 / 2 alpha - B_alpha / 2
double g_nu(const RadialMeasure& nu, double alpha, double s);

enum class Method { closed_form, quadrature };

struct FunctionalReport {
  std::map<double, double> U_at;
  double energy = 0.0;
  double B_alpha = 0.0;
  double I_alpha = 0.0;
  double J_alpha = 0.0;       // \int |w|^2/alpha dnu - Sigma
  double J_alpha_half = 0.0;  // \int |w|^2/(2 alpha) dnu - Sigma
  double argmax_w = 0.0;
  Method method = Method::closed_form;
  std::string convention_note;
};

FunctionalReport functional_I(const RadialMeasure& nu, double alpha, Method method = Method::closed_form);
double functional_J(const RadialMeasure& nu, double alpha);
double functional_J_half(const RadialMeasure& nu, double alpha);

struct Sides {
  double lhs;
  double rhs;
};

/// U(r) - U(0) against \int_0^r nu(closed disk t) / t dt.
Sides jensen_check(const RadialMeasure& nu, double r);

/// Samples on the square [-half, half]^2 with spacing h.
struct GriddedFunction {
  double half_width = 0.0;
  double h = 0.0;
  int n = 0;  // points per side
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

GriddedFunction sample_on_grid(const TestFunction& phi, double h, double margin = 0.25);
double dirichlet_energy(const GriddedFunction& g);

/// \int phi dnu; angular trapezoid on circles, Gauss-Kronrod in radius.
double integrate(const RadialMeasure& nu, const TestFunction& phi);

Sides lin_stats_gap_bound(const RadialMeasure& nu, const RadialMeasure& mu, const TestFunction& phi,
                          double grid_h = 1.0 / 32);

enum class CatalogKind { gef_constrained, gef_global_radon, ginibre };

RadialMeasure catalog(double p, double alpha, CatalogKind which = CatalogKind::gef_constrained);
RadialMeasure equilibrium(double alpha);

/// I_alpha of the constrained minimizer: log(alpha)/2 - 3/4 + Z_p / alpha^2.
double minimal_I(double p, double alpha);

}  // namespace gefhole
