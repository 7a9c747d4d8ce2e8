#include "netsample/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "netsample/io.hpp"

namespace netsample {

double Kernel::reversibility_violation() const {
  double worst = 0.0;
  const auto n = stationary.size();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      worst = std::max(worst, std::abs(stationary(i) * transition(i, j) -
                                       stationary(j) * transition(j, i)));
  return worst;
}

ReversibilityError::ReversibilityError(double max_violation)
    : ValidationError("kernel is not reversible: max |pi_i P_ij - pi_j P_ji| = " +
                      fmt_double(max_violation)),
      max_violation_(max_violation) {}

Eigen::VectorXd SpectralKernel::coefficients(std::span<const double> y) const {
  if (y.size() != size()) throw ValidationError("feature length does not match kernel size");
  Eigen::VectorXd weighted(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i)
    weighted(static_cast<Eigen::Index>(i)) = y[i] * kernel.stationary(static_cast<Eigen::Index>(i));
  return eigenfunctions.transpose() * weighted;
}

Kernel srw_kernel(const Graph& g) {
  const auto n = g.node_count();
  if (n == 0) throw ValidationError("srw_kernel: empty graph");
  for (NodeId i = 0; i < n; ++i)
    if (!(g.degree(i) > 0.0))
      throw ValidationError("srw_kernel: node " + std::to_string(g.label(i)) + " is isolated");
  std::size_t n_comp = 0;
  g.component_ids(&n_comp);
  if (n_comp > 1)
    throw NumericError("srw_kernel: graph is disconnected; kernel would have |lambda_2| = 1");

  Kernel k;
  const auto nn = static_cast<Eigen::Index>(n);
  k.transition = Eigen::MatrixXd::Zero(nn, nn);
  k.stationary.resize(nn);
  for (NodeId i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) k.transition(i, nb.node) = nb.weight / g.degree(i);
    k.stationary(i) = g.degree(i) / g.total_degree();
  }
  return k;
}

namespace {

bool support_irreducible(const Eigen::MatrixXd& p) {
  // Forward and backward reachability from state 0 over positive entries.
  const auto n = p.rows();
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (Eigen::Index w = 0; w < n; ++w) {
        const double entry = transpose ? p(w, v) : p(v, w);
        if (entry > 0.0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == static_cast<std::size_t>(n);
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace

Kernel custom_kernel(const Eigen::MatrixXd& transition, double row_tol,
                     const SpectralTolerances& tol) {
  const auto n = transition.rows();
  if (n == 0 || transition.cols() != n) throw ValidationError("kernel must be a nonempty square matrix");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(transition(i, j) >= 0.0) || !std::isfinite(transition(i, j)))
        throw ValidationError("kernel entries must be finite and nonnegative");
    const double s = transition.row(i).sum();
    if (std::abs(s - 1.0) > row_tol)
      throw ValidationError("kernel row " + std::to_string(i) + " sums to " + fmt_double(s));
  }
  if (!support_irreducible(transition))
    throw NumericError("kernel is reducible: stationary distribution is not unique (|lambda_2| = 1)");

  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  constexpr int kMaxIter = 1000000;
  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    const Eigen::RowVectorXd step = pi * transition;
    const double residual = (step - pi).lpNorm<1>();
    if (residual < 1e-12) {
      converged = true;
      break;
    }
    pi = 0.5 * (pi + step);
    pi /= pi.sum();
  }
  if (!converged) throw NumericError("power iteration for the stationary distribution did not converge");

  Kernel k{transition, pi.transpose()};
  const double violation = k.reversibility_violation();
  if (violation > tol.reversibility) throw ReversibilityError(violation);
  return k;
}

SpectralKernel spectral_decompose(const Kernel& k, const SpectralTolerances& tol) {
  const auto n = static_cast<Eigen::Index>(k.size());
  if (k.size() > tol.max_nodes)
    throw ValidationError("spectral_decompose: N = " + std::to_string(k.size()) +
                          " exceeds the dense limit " + std::to_string(tol.max_nodes));
  const Eigen::ArrayXd sqrt_pi = k.stationary.array().sqrt();
  Eigen::MatrixXd sym(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      sym(i, j) = sqrt_pi(i) / sqrt_pi(j) * k.transition(i, j);
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(vals(a)), mb = std::abs(vals(b));
    if (ma != mb) return ma > mb;
    return vals(a) > vals(b);
  });
  // The Perron eigenvalue can lose its place to a -1 of equal modulus only in
  // periodic chains; keep the largest signed first.
  const auto top = std::max_element(order.begin(), order.end(),
                                    [&](Eigen::Index a, Eigen::Index b) { return vals(a) < vals(b); });
  std::rotate(order.begin(), top, top + 1);

  SpectralKernel s;
  s.kernel = k;
  s.eigenvalues.resize(n);
  s.eigenfunctions.resize(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto src = order[static_cast<std::size_t>(c)];
    s.eigenvalues(c) = std::clamp(vals(src), -1.0, 1.0);
    Eigen::VectorXd f = solver.eigenvectors().col(src).array() / sqrt_pi;
    const double norm = std::sqrt((f.array().square() * k.stationary.array()).sum());
    s.eigenfunctions.col(c) = f / norm;
  }
  s.eigenvalues(0) = 1.0;
  s.eigenfunctions.col(0).setOnes();

  if (n > 1) {
    const double l2 = tol.allow_periodic ? s.eigenvalues(1) : std::abs(s.eigenvalues(1));
    if (l2 >= 1.0 - tol.second_eigenvalue_gap)
      throw NumericError("|lambda_2| = " + fmt_double(std::abs(s.eigenvalues(1))) +
                         ": chain is disconnected or periodic");
  }
  return s;
}

SpectralCheck check_spectral(const SpectralKernel& s) {
  SpectralCheck out;
  const auto& pi = s.kernel.stationary;
  const auto& f = s.eigenfunctions;
  const Eigen::MatrixXd gram = f.transpose() * pi.asDiagonal() * f;
  out.orthonormality = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd pf = s.kernel.transition * f;
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    const double scale = std::max(1.0, f.col(c).cwiseAbs().maxCoeff());
    const double r = (pf.col(c) - s.eigenvalues(c) * f.col(c)).cwiseAbs().maxCoeff() / scale;
    out.eigen_residual = std::max(out.eigen_residual, r);
  }
  // P = F diag(lambda) F^T diag(pi).
  const Eigen::MatrixXd rebuilt = f * s.eigenvalues.asDiagonal() * f.transpose() * pi.asDiagonal();
  out.reconstruction = (rebuilt - s.kernel.transition).cwiseAbs().maxCoeff();
  return out;
}

double inner_product_pi(std::span<const double> f, std::span<const double> g,
                        std::span<const double> pi) {
  if (f.size() != g.size() || f.size() != pi.size())
    throw ValidationError("inner_product_pi: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i] * pi[i];
  return acc;
}

double transition_power_prob(const SpectralKernel& s, NodeId i, NodeId j, unsigned t) {
  const auto n = static_cast<Eigen::Index>(s.size());
  if (i >= s.size() || j >= s.size()) throw ValidationError("transition_power_prob: node out of range");
  double acc = 1.0;
  for (Eigen::Index c = 1; c < n; ++c)
    acc += std::pow(s.eigenvalues(c), static_cast<int>(t)) * s.eigenfunctions(i, c) *
           s.eigenfunctions(j, c);
  return s.kernel.stationary(j) * acc;
}

double stationary_variance(const SpectralKernel& s, std::span<const double> y) {
  const Eigen::VectorXd c = s.coefficients(y);
  return c.tail(c.size() - 1).squaredNorm();
}

double rho_correlation(const SpectralKernel& s, std::span<const double> y, std::size_t ell) {
  if (ell < 2 || ell > s.size()) throw ValidationError("rho_correlation: ell must lie in [2, N]");
  const Eigen::VectorXd c = s.coefficients(y);
  const double sigma2 = c.tail(c.size() - 1).squaredNorm();
  double second_moment = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) second_moment += s.kernel.stationary(static_cast<Eigen::Index>(i)) * y[i] * y[i];
  if (!(sigma2 > 1e-24 * std::max(1.0, second_moment)))
    throw NumericError("rho_correlation: y is constant under pi (sigma = 0)");
  return c(static_cast<Eigen::Index>(ell - 1)) / std::sqrt(sigma2);
}

}  // namespace netsample
