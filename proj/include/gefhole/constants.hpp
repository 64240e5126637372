#pragma once

namespace gefhole {

enum class Branch { deficit, overcrowd, hole, saturated };

struct RateConstant {
  double p;
  double q;
  double Z;
  Branch branch;
};

/// Companion value q != p with q (log q - 1) = p (log p - 1).
/// q(0) = e, q(1) = 1, q(p) = 0 for p >= e.
double q_of_p(double p);

/// Z_p = |\int_p^{q(p)} x log x dx|.
double z_const(double p);

RateConstant rate_constant(double p);

/// Ginibre analogue G_p = |\int_1^p (1 - x + x log x) dx|.
double ginibre_g(double p);

/// Jancovici-Lebowitz-Manificat exponent psi(b).
double jlm_exponent(double b);

/// 2 a^3 / 3, valid for b in (4/3, 2).
double moderate_rate(double a, double b);

/// log A_{p,k} = log b_{k0}(r) - log b_k(r), k0 = floor(p r^2).
double main_term_logratio(double p, int k, double r);

int main_index(double p, double r);

/// x^2 (2 log x - 1) / 4, extended by 0 at x = 0.
double h_antiderivative(double x);

/// The main term bracket. Upper side: C1 log(k+1); lower side: C1 log(k0+1).
struct MainTermBracket {
  double deviation;  // log A - [(p/2) log(e/p) r^2 - (k/2) log(e r^2/k)]
  double lower;
  double upper;
  bool holds() const { return deviation >= -lower && deviation <= upper; }
};

MainTermBracket main_term_bracket(double p, int k, double r, double C1 = 2.0);

}  // namespace gefhole
