#include "netsample/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netsample/errors.hpp"
#include "netsample/io.hpp"
#include "netsample/parallel.hpp"

namespace netsample {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pi_second_moment(const SpectralKernel& s, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    acc += s.kernel.stationary(static_cast<Eigen::Index>(i)) * y[i] * y[i];
  return acc;
}

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

VarianceReport variance_exact(const SpectralKernel& s, std::span<const double> y,
                              const DistanceSpectrum& ds, unsigned threads) {
  const std::size_t N = s.size();
  if (y.size() != N) throw ValidationError("feature length does not match the kernel");
  if (ds.n == 0) throw ValidationError("empty referral tree");
  // A periodic chain (lambda = -1) is only present when the decomposition
  // was asked to allow it; a second eigenvalue at +1 is never valid.
  if (N >= 2 && s.lambda(2) >= 1.0 - 1e-10)
    throw NumericError("lambda_2 = 1; the chain is reducible");
  for (double v : y)
    if (!std::isfinite(v)) throw ValidationError("feature has a non-finite value");

  VarianceReport r;
  r.n = ds.n;
  r.population = N;
  const Eigen::VectorXd c = s.coefficients(y);
  r.contributions.resize(N > 0 ? N - 1 : 0);
  parallel_for(r.contributions.size(), threads, [&](std::size_t k) {
    auto& row = r.contributions[k];
    row.ell = k + 2;
    row.lambda = s.lambda(row.ell);
    row.coef2 = c(static_cast<Eigen::Index>(k + 1)) * c(static_cast<Eigen::Index>(k + 1));
    row.g = g_eval(ds, row.lambda);
    row.product = row.coef2 * row.g;
  });
  for (const auto& row : r.contributions) {
    r.var_rds += row.product;
    r.sigma2 += row.coef2;
  }
  const double n = static_cast<double>(r.n);
  r.var_iid = r.sigma2 / n;
  r.lambda2 = N >= 2 ? s.lambda(2) : 0.0;
  r.g_lambda2 = N >= 2 ? g_eval(ds, r.lambda2) : 1.0;
  r.de_defined = r.sigma2 > 1e-24 * std::max(1.0, pi_second_moment(s, y));
  if (r.de_defined) {
    r.design_effect = r.var_rds / r.var_iid;
    r.rho2 = r.contributions.front().coef2 / r.sigma2;
    if (auto b = de_bounds(r)) {
      r.de_lower = b->lower;
      r.de_upper = b->upper;
    }
  } else {
    r.design_effect = kNaN;
    r.rho2 = kNaN;
  }
  return r;
}

double cov_pair(const SpectralKernel& s, std::span<const double> y, unsigned d) {
  const Eigen::VectorXd c = s.coefficients(y);
  double acc = 0.0;
  for (std::size_t ell = 2; ell <= s.size(); ++ell) {
    const double ce = c(static_cast<Eigen::Index>(ell - 1));
    acc += std::pow(s.lambda(ell), static_cast<double>(d)) * ce * ce;
  }
  return acc;
}

std::optional<DeBounds> de_bounds(const VarianceReport& report) {
  if (!report.de_defined || !(report.lambda2 > 0.0)) return std::nullopt;
  const double upper = static_cast<double>(report.n) * report.g_lambda2;
  return DeBounds{report.rho2 * upper, upper};
}

AutocorrEstimate autocorr_lambda_estimate(const WalkSample& ws) {
  if (!ws.tree) throw ValidationError("sample has no referral tree");
  const auto& tree = *ws.tree;
  const std::size_t n = ws.y.size();
  if (n != tree.size()) throw ValidationError("sample size does not match its tree");
  if (n < 2) throw ValidationError("autocorrelation needs at least 2 observations");
  const double mean = sample_mean(ws.y);
  AutocorrEstimate out;
  for (double v : ws.y) out.sigma2 += (v - mean) * (v - mean);
  out.sigma2 /= static_cast<double>(n);
  if (!(out.sigma2 > 0.0)) throw NumericError("sample variance is zero; autocorrelation undefined");
  double cross = 0.0;
  for (TreeIndex v = 0; v < n; ++v) {
    const auto p = tree.parent(v);
    if (p == kNoParent) continue;
    cross += (ws.y[static_cast<std::size_t>(p)] - mean) * (ws.y[v] - mean);
    ++out.edges;
  }
  if (out.edges == 0) throw ValidationError("tree has no parent-child edges");
  const double raw = cross / (static_cast<double>(out.edges) * out.sigma2);
  constexpr double kLimit = 1.0 - 1e-9;
  out.lambda = std::clamp(raw, -kLimit, kLimit);
  out.clamped = out.lambda != raw;
  return out;
}

double plug_in_variance_example1(const WalkSample& ws, const DistanceSpectrum& ds) {
  const auto est = autocorr_lambda_estimate(ws);
  return est.sigma2 * g_eval(ds, est.lambda);
}

SbmPlugIn sbm_plug_in_variance(std::span<const int> labels, std::span<const double> y,
                               const ReferralForest& f, int K) {
  if (K < 2) throw ValidationError("block plug-in needs K >= 2");
  const std::size_t n = f.size();
  if (labels.size() != n || y.size() != n)
    throw ValidationError("labels and values must have one entry per tree node");
  const auto k = static_cast<Eigen::Index>(K);
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= K)
      throw ValidationError("block label " + std::to_string(labels[i]) + " outside [0, K)");
    sums(labels[i]) += y[i];
    counts(labels[i]) += 1.0;
  }
  for (Eigen::Index b = 0; b < k; ++b)
    if (counts(b) == 0.0) throw ValidationError("block " + std::to_string(b) + " is never observed");

  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(k, k);
  std::size_t edges = 0;
  for (TreeIndex v = 0; v < n; ++v) {
    const auto p = f.parent(v);
    if (p == kNoParent) continue;
    const int a = labels[static_cast<std::size_t>(p)], b = labels[v];
    joint(a, b) += 1.0;
    joint(b, a) += 1.0;
    ++edges;
  }
  if (edges == 0) throw ValidationError("tree has no parent-child edges");

  SbmPlugIn out;
  out.block_means = sums.cwiseQuotient(counts);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - out.block_means(labels[i]);
    out.within_sigma2 += d * d;
  }
  out.within_sigma2 /= static_cast<double>(n);

  Eigen::MatrixXd B(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const double row = joint.row(a).sum();
    if (row == 0.0)
      throw NumericError("block " + std::to_string(a) + " has no observed referrals; B_hat is reducible");
    B.row(a) = joint.row(a) / row;
  }
  Kernel kernel;
  try {
    kernel = custom_kernel(B);
  } catch (const NumericError& e) {
    throw NumericError(std::string("B_hat is reducible: ") + e.what());
  }
  const auto s = spectral_decompose(kernel);
  out.block_transition = B;
  out.block_pi = s.kernel.stationary;
  out.eigenvalues = s.eigenvalues;

  const auto ds = distance_spectrum(f);
  std::vector<double> yhat(out.block_means.data(), out.block_means.data() + k);
  const Eigen::VectorXd c = s.coefficients(yhat);
  double total = 0.0;
  for (std::size_t ell = 2; ell <= static_cast<std::size_t>(K); ++ell) {
    const double ce = c(static_cast<Eigen::Index>(ell - 1));
    total += ce * ce * g_eval(ds, s.lambda(ell));
  }
  out.variance = total + out.within_sigma2 / static_cast<double>(n);
  return out;
}

nlohmann::json to_json(const VarianceReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["population"] = r.population;
  j["lambda2"] = r.lambda2;
  j["g_lambda2"] = r.g_lambda2;
  j["var_rds"] = r.var_rds;
  j["sigma2"] = r.sigma2;
  j["var_iid"] = r.var_iid;
  j["design_effect"] = number_or_null(r.design_effect);
  j["de_defined"] = r.de_defined;
  j["rho2"] = number_or_null(r.rho2);
  j["de_lower"] = r.de_lower ? nlohmann::json(*r.de_lower) : nlohmann::json(nullptr);
  j["de_upper"] = r.de_upper ? nlohmann::json(*r.de_upper) : nlohmann::json(nullptr);
  auto& rows = j["contributions"] = nlohmann::json::array();
  for (const auto& c : r.contributions)
    rows.push_back({{"ell", c.ell}, {"lambda", c.lambda}, {"coef2", c.coef2}, {"G", c.g},
                    {"product", c.product}});
  return j;
}

std::string to_csv(const VarianceReport& r) {
  std::ostringstream out;
  out << "ell,lambda,coef2,G,product\n";
  for (const auto& c : r.contributions)
    out << c.ell << ',' << fmt_double(c.lambda) << ',' << fmt_double(c.coef2) << ','
        << fmt_double(c.g) << ',' << fmt_double(c.product) << '\n';
  return out.str();
}

}  // namespace netsample
