#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "netsample/errors.hpp"
#include "netsample/graph.hpp"

namespace netsample {

struct SpectralTolerances {
  double orthonormality = 1e-10;
  double eigen_residual = 1e-8;  // relative, per coordinate
  double reversibility = 1e-10;
  double second_eigenvalue_gap = 1e-10;  // |lambda_2| must stay below 1 - gap
  std::size_t max_nodes = 5000;          // dense decomposition size limit
  /// Accept a periodic chain (an eigenvalue at -1, e.g. a bipartite graph);
  /// only a second unit eigenvalue at +1 is rejected then.
  bool allow_periodic = false;
};

/// Row-stochastic transition matrix with its stationary distribution.
struct Kernel {
  Eigen::MatrixXd transition;
  Eigen::VectorXd stationary;

  std::size_t size() const { return static_cast<std::size_t>(stationary.size()); }
  /// max_{i,j} |pi_i P_ij - pi_j P_ji|.
  double reversibility_violation() const;
};

/// Thrown by custom_kernel when detailed balance fails beyond tolerance.
class ReversibilityError : public ValidationError {
 public:
  explicit ReversibilityError(double max_violation);
  double max_violation() const { return max_violation_; }

 private:
  double max_violation_;
};

/// Kernel plus its pi-orthonormal eigensystem.
///
/// Indices are 1-based as in the usual notation: lambda(1) == 1 exactly and
/// f(1) is the constant function 1. Eigenvalues are ordered by decreasing
/// modulus; among equal moduli the positive one comes first, then the
/// solver's order.
struct SpectralKernel {
  Kernel kernel;
  Eigen::VectorXd eigenvalues;     // eigenvalues(ell - 1)
  Eigen::MatrixXd eigenfunctions;  // column ell - 1 holds f_ell

  std::size_t size() const { return kernel.size(); }
  double lambda(std::size_t ell) const { return eigenvalues(static_cast<Eigen::Index>(ell - 1)); }
  auto f(std::size_t ell) const { return eigenfunctions.col(static_cast<Eigen::Index>(ell - 1)); }

  /// <y, f_ell>_pi for every ell (entry ell - 1).
  Eigen::VectorXd coefficients(std::span<const double> y) const;
};

/// Residuals of the spectral contract, for tests and diagnostics.
struct SpectralCheck {
  double orthonormality = 0.0;   // max |<f_a,f_b>_pi - delta_ab|
  double eigen_residual = 0.0;   // max |P f - lambda f| / max(1, |f|_inf)
  double reconstruction = 0.0;   // max |P_ij - pi_j (1 + sum lambda f f)|
};

/// Simple random walk: P_ij = w_ij / deg(i), pi_j = deg(j) / sum deg.
/// Throws NumericError if g is disconnected, ValidationError if a node has
/// zero degree.
Kernel srw_kernel(const Graph& g);

/// Validates a user-supplied kernel. Rows must be nonnegative and sum to 1
/// within row_tol; the support must be irreducible; pi is obtained by power
/// iteration on (I + P) / 2 to an L1 residual below 1e-12. Throws
/// ReversibilityError if detailed balance fails beyond tol.reversibility.
Kernel custom_kernel(const Eigen::MatrixXd& transition, double row_tol = 1e-12,
                     const SpectralTolerances& tol = {});

/// Full symmetric decomposition of S = D^{1/2} P D^{-1/2} (D = diag(pi)),
/// mapped back as f = v / sqrt(pi). Throws NumericError if |lambda_2| >= 1 -
/// gap (lambda_2 >= 1 - gap with tol.allow_periodic), ValidationError if N
/// exceeds tol.max_nodes.
SpectralKernel spectral_decompose(const Kernel& k, const SpectralTolerances& tol = {});

SpectralCheck check_spectral(const SpectralKernel& s);

/// sum_i f(i) g(i) pi_i.
double inner_product_pi(std::span<const double> f, std::span<const double> g,
                        std::span<const double> pi);

/// P^t_ij from the spectral expansion pi_j + pi_j sum_{ell>=2} lambda^t f(i) f(j).
double transition_power_prob(const SpectralKernel& s, NodeId i, NodeId j, unsigned t);

/// Var_pi(Y_0) = sum_{ell>=2} <y, f_ell>_pi^2.
double stationary_variance(const SpectralKernel& s, std::span<const double> y);

/// <y, f_ell>_pi / sigma. Throws NumericError when y is constant.
double rho_correlation(const SpectralKernel& s, std::span<const double> y, std::size_t ell);

}  // namespace netsample
