#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "gefhole/series.hpp"
#include "gefhole/test_function.hpp"

namespace gefhole {

enum class Plane { scaled, physical };

/// Zeros z_1..z_N with smoothing radius t.
struct ZeroConfig {
  std::vector<std::complex<double>> zeros;
  double smoothing_t = 1e-4;
  double scale = 1.0;  // L of the polynomial the zeros came from
  Plane plane = Plane::scaled;
  bool near_multiple = false;
  double max_residual = 0.0;  // max |P/P'| / max(1, |z|) after polishing

  int size() const { return static_cast<int>(zeros.size()); }
  /// Zeros mapped to the physical plane, w = L z.
  std::vector<std::complex<double>> physical() const;
};

struct RootOptions {
  int companion_max_degree = 16;
  int max_aberth_iterations = 400;
  int polish_iterations = 3;
};

ZeroConfig roots(const CoeffVector& c, const RootOptions& opt = {});

/// Same as roots() but forced through one method, for cross-checks.
ZeroConfig roots_companion(const CoeffVector& c);
ZeroConfig roots_aberth(const CoeffVector& c);

int count_in_disk(const ZeroConfig& zc, double rho);

struct ContourCount {
  int count = 0;
  double raw = 0.0;               // trapezoid value before rounding
  double nearest_root_estimate;   // min over nodes of |P/P'|
  int quad_points = 0;
  double error_estimate = 0.0;    // |raw(Q) - raw(Q/2)|
};

/// Trapezoid rule for (1/2 pi i) \oint P'/P dz on |z| = rho. Throws NearCircleRoot
/// if a root is closer than 1e-6 rho to the circle or the rule is unresolved.
ContourCount argument_principle_count(const CoeffVector& c, double rho, int quad_points);

/// Doubles quad_points from q0 until the count is resolved or q_max is reached.
ContourCount argument_principle_count_adaptive(const CoeffVector& c, double rho, int q0 = 1024,
                                               int q_max = 1 << 22);

struct WindingCount {
  int count = 0;
  int evaluations = 0;
  int max_depth = 0;
  double min_abs = std::numeric_limits<double>::infinity();  // relative to the largest term
};

/// Zeros in |z| < rho from the winding of P on the circle. Each arc is subdivided until
/// |P| at its ends exceeds the derivative bound times its length, so the phase increments
/// are certified up to rounding. Throws NearCircleRoot when a zero sits on the contour.
WindingCount winding_count(const CoeffVector& c, double rho, int q0 = 32);

double linear_statistics(const ZeroConfig& zc, const TestFunction& phi, double r);

struct PerturbationReport {
  double difference = 0.0;
  double bound = 0.0;
  bool within = true;
};

PerturbationReport perturbation_match(const ZeroConfig& f_roots, const ZeroConfig& fg_roots, int M,
                                      double gamma, const TestFunction& phi, double r);

}  // namespace gefhole
