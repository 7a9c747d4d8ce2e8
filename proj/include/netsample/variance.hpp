#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "netsample/estimators.hpp"
#include "netsample/spectral.hpp"
#include "netsample/tree.hpp"

namespace netsample {

struct VarianceContribution {
  std::size_t ell = 0;
  double lambda = 0.0;
  double coef2 = 0.0;    // <y, f_ell>_pi^2
  double g = 0.0;        // G(lambda_ell)
  double product = 0.0;  // coef2 * g
};

struct VarianceReport {
  std::vector<VarianceContribution> contributions;  // ell = 2..N
  std::size_t n = 0;                                 // tree size
  std::size_t population = 0;                        // N
  double lambda2 = 0.0;
  double g_lambda2 = 0.0;
  double var_rds = 0.0;
  double sigma2 = 0.0;
  double var_iid = 0.0;
  double design_effect = 0.0;  // NaN when !de_defined
  bool de_defined = false;     // false for a feature constant under pi
  double rho2 = 0.0;           // rho_pi(y, f_2)^2, NaN when !de_defined
  std::optional<double> de_lower, de_upper;  // only when lambda2 > 0
};

/// Var(mu_hat) = sum_{ell>=2} <y, f_ell>^2_pi G(lambda_ell) and the derived
/// design effect n Var / sigma^2. Forests use z^inf = 0. Contributions are
/// evaluated in parallel over ell. Throws NumericError when lambda_2 = 1.
VarianceReport variance_exact(const SpectralKernel& s, std::span<const double> y,
                              const DistanceSpectrum& ds, unsigned threads = 1);

/// Cov(Y_sigma, Y_tau) for nodes at tree distance d: sum_{ell>=2} lambda^d c^2.
double cov_pair(const SpectralKernel& s, std::span<const double> y, unsigned d);

struct DeBounds {
  double lower = 0.0;  // rho^2 n G(lambda_2)
  double upper = 0.0;  // n G(lambda_2)
};
/// Empty when lambda_2 <= 0 or the design effect is undefined.
std::optional<DeBounds> de_bounds(const VarianceReport& report);

struct AutocorrEstimate {
  double lambda = 0.0;
  bool clamped = false;
  double sigma2 = 0.0;  // plain sample variance, 1/n normalization
  std::size_t edges = 0;
};

/// Lag-one autocorrelation over the parent-child edges of the sample's
/// tree, normalized by the sample variance of all n observations and
/// clamped to [-1 + 1e-9, 1 - 1e-9].
AutocorrEstimate autocorr_lambda_estimate(const WalkSample& ws);

/// sigma_hat^2 G(lambda_hat) with lambda_hat from autocorr_lambda_estimate.
double plug_in_variance_example1(const WalkSample& ws, const DistanceSpectrum& ds);

struct SbmPlugIn {
  double variance = 0.0;
  Eigen::MatrixXd block_transition;  // B_hat
  Eigen::VectorXd block_pi;
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd block_means;       // y_hat
  double within_sigma2 = 0.0;        // pooled within-block variance
};

/// Block-level plug-in: B_hat from symmetrized parent-child block counts,
/// y_hat the per-block means, sigma_hat^2 the pooled within-block variance,
/// sum_{ell=2..K} <y_hat, f_ell>^2 G(lambda_ell) + sigma_hat^2 / n.
SbmPlugIn sbm_plug_in_variance(std::span<const int> labels, std::span<const double> y,
                               const ReferralForest& f, int K);

nlohmann::json to_json(const VarianceReport& report);
/// One row per ell: ell,lambda,coef2,G,product.
std::string to_csv(const VarianceReport& report);

}  // namespace netsample
