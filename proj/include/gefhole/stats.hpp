#pragma once

#include <functional>
#include <vector>

namespace gefhole {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double n_eff = 0.0;
};

/// P[K > lambda] for the limiting Kolmogorov law.
double kolmogorov_sf(double lambda);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& x);

/// Potential scale reduction factor over m chains of equal length.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

/// Geyer initial-positive-sequence estimate.
double effective_sample_size(const std::vector<double>& x);

}  // namespace gefhole
