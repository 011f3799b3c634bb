#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>

#include "qmcopt/normal.hpp"

namespace qmcopt {

// Which base draws a problem consumes. Estimators map uniform batches to
// standard normals for StdNormal problems and pass them through untouched
// for Uniform01 problems.
enum class BaseDraws { StdNormal, Uniform01 };

// KL(q || N(0, I)) for a mean-field Gaussian and its gradient with respect
// to packed theta = (mu, log_sigma).
double kl_standard_normal(const DiagGaussian& q);
Eigen::VectorXd kl_standard_normal_grad(const DiagGaussian& q);

// A stochastic objective F(theta) = E_z f(z; theta), with f the per-sample
// negative-ELBO integrand (so reported ELBO estimates are -mean f).
class VBProblem {
 public:
  virtual ~VBProblem() = default;

  virtual int sample_dim() const = 0;  // columns a sampler must provide
  virtual int param_dim() const = 0;
  virtual BaseDraws base() const { return BaseDraws::StdNormal; }
  virtual Eigen::VectorXd init_theta() const {
    return Eigen::VectorXd::Zero(param_dim());
  }

  virtual double value(const Eigen::VectorXd& z,
                       const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd hess_vec(const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& theta,
                                   const Eigen::VectorXd& v) const = 0;

  // Batch means over the rows of Z. Defaults loop over samples; the dense
  // models override with matrix arithmetic.
  virtual void batch_value_grad(const Eigen::MatrixXd& Z,
                                const Eigen::VectorXd& theta, double& f_mean,
                                Eigen::VectorXd& g_mean) const;
  virtual Eigen::VectorXd batch_hess_vec(const Eigen::MatrixXd& Z,
                                         const Eigen::VectorXd& theta,
                                         const Eigen::VectorXd& v) const;

  // Optional closed-form oracles.
  virtual bool has_optimum() const { return false; }
  virtual Eigen::VectorXd optimum() const {
    throw std::logic_error("no closed-form optimum for this problem");
  }
  virtual bool has_objective() const { return false; }
  virtual double objective(const Eigen::VectorXd&) const {
    throw std::logic_error("no closed-form objective for this problem");
  }
  virtual Eigen::VectorXd objective_gradient(const Eigen::VectorXd&) const {
    throw std::logic_error("no closed-form objective for this problem");
  }
};

// Shared chain rule for models built on the location-scale map
// zeta = mu + sigma .* z with theta = (mu, log_sigma). Derived classes
// supply the latent-space potential phi and a deterministic term D(theta)
// with diagonal Hessian; f(z; theta) = phi(zeta) + D(theta).
class ReparamVBModel : public VBProblem {
 public:
  int sample_dim() const override { return latent_dim(); }
  int param_dim() const override { return 2 * latent_dim(); }

  double value(const Eigen::VectorXd& z,
               const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& z,
                           const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd hess_vec(const Eigen::VectorXd& z,
                           const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& v) const override;

  virtual int latent_dim() const = 0;

 protected:
  virtual double phi(const Eigen::VectorXd& zeta) const = 0;
  virtual Eigen::VectorXd phi_grad(const Eigen::VectorXd& zeta) const = 0;
  virtual Eigen::VectorXd phi_hess_vec(const Eigen::VectorXd& zeta,
                                       const Eigen::VectorXd& w) const = 0;
  virtual double d_value(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd d_grad(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd d_hess_diag(const Eigen::VectorXd& theta) const = 0;
};

// ---------------------------------------------------------------------------
// Bayesian linear regression, y | beta ~ N(X beta, gamma^2 I), beta ~ N(0, I).
// Fully conjugate, so the variational optimum and objective are closed form.

struct LinRegData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  double gamma = 1.0;
};

LinRegData make_linreg_data(int n_obs, int d, double gamma, std::uint64_t seed);

class LinRegModel : public ReparamVBModel {
 public:
  explicit LinRegModel(LinRegData data);

  int latent_dim() const override { return static_cast<int>(data_.X.cols()); }

  void batch_value_grad(const Eigen::MatrixXd& Z, const Eigen::VectorXd& theta,
                        double& f_mean, Eigen::VectorXd& g_mean) const override;
  Eigen::VectorXd batch_hess_vec(const Eigen::MatrixXd& Z,
                                 const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& v) const override;

  bool has_optimum() const override { return true; }
  Eigen::VectorXd optimum() const override;
  bool has_objective() const override { return true; }
  double objective(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& theta) const override;

  const LinRegData& data() const { return data_; }

 protected:
  double phi(const Eigen::VectorXd& zeta) const override;
  Eigen::VectorXd phi_grad(const Eigen::VectorXd& zeta) const override;
  Eigen::VectorXd phi_hess_vec(const Eigen::VectorXd& zeta,
                               const Eigen::VectorXd& w) const override;
  double d_value(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd d_grad(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd d_hess_diag(const Eigen::VectorXd& theta) const override;

 private:
  LinRegData data_;
  Eigen::MatrixXd xtx_;      // X'X / gamma^2
  Eigen::VectorXd xty_;      // X'y / gamma^2
  Eigen::VectorXd col_sq_;   // ||X_j||^2
  double log_norm_;          // (N/2) log(2 pi gamma^2)
};

// ---------------------------------------------------------------------------
// Bayesian logistic regression with labels y_i in {-1, +1} and beta ~ N(0, I).

struct LogRegData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;  // entries -1 or +1
};

LogRegData make_logreg_data(int n_obs, int d, std::uint64_t seed);

class LogRegModel : public ReparamVBModel {
 public:
  explicit LogRegModel(LogRegData data);

  int latent_dim() const override { return static_cast<int>(data_.X.cols()); }

  void batch_value_grad(const Eigen::MatrixXd& Z, const Eigen::VectorXd& theta,
                        double& f_mean, Eigen::VectorXd& g_mean) const override;
  Eigen::VectorXd batch_hess_vec(const Eigen::MatrixXd& Z,
                                 const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& v) const override;

  const LogRegData& data() const { return data_; }

 protected:
  double phi(const Eigen::VectorXd& zeta) const override;
  Eigen::VectorXd phi_grad(const Eigen::VectorXd& zeta) const override;
  Eigen::VectorXd phi_hess_vec(const Eigen::VectorXd& zeta,
                               const Eigen::VectorXd& w) const override;
  double d_value(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd d_grad(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd d_hess_diag(const Eigen::VectorXd& theta) const override;

 private:
  LogRegData data_;
};

// ---------------------------------------------------------------------------
// Crossed random effects: Y_ij ~ N(mu + a_i + b_j, 1) with
// a_i ~ N(0, sigma_a^2), b_j ~ N(0, sigma_b^2) and standard normal
// hyperpriors on mu, log sigma_a, log sigma_b. Latent layout
// (mu, log sigma_a, log sigma_b, a_1..a_I, b_1..b_J), dimension I + J + 3.
// The hierarchical prior on a and b stays inside the stochastic integrand;
// the three hyperparameter coordinates use the analytic Gaussian KL and the
// a/b coordinates contribute their analytic entropy.

struct CrossedData {
  Eigen::MatrixXd Y;  // I x J
};

CrossedData make_crossed_data(int n_rows, int n_cols, std::uint64_t seed);

class CrossedModel : public ReparamVBModel {
 public:
  explicit CrossedModel(CrossedData data);

  int latent_dim() const override { return n_rows_ + n_cols_ + 3; }
  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }

 protected:
  double phi(const Eigen::VectorXd& zeta) const override;
  Eigen::VectorXd phi_grad(const Eigen::VectorXd& zeta) const override;
  Eigen::VectorXd phi_hess_vec(const Eigen::VectorXd& zeta,
                               const Eigen::VectorXd& w) const override;
  double d_value(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd d_grad(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd d_hess_diag(const Eigen::VectorXd& theta) const override;

 private:
  CrossedData data_;
  int n_rows_;
  int n_cols_;
};

// ---------------------------------------------------------------------------
// Strongly convex synthetic problem with additive gradient noise,
// f(z; theta) = 0.5 (theta - t*)' A (theta - t*) + tau psi(z)' theta,
// A = diag(spectrum). The curvature constants are exact (c = min, L = max),
// the Hessian is constant, and E psi = 0 so gradients are unbiased. psi is
// the identity on standard normal draws or sqrt(12) (u - 1/2) on uniforms
// (unit variance, bounded), which gives the bounded-noise variant.

class QuadraticProblem : public VBProblem {
 public:
  QuadraticProblem(Eigen::VectorXd spectrum, Eigen::VectorXd theta_star,
                   double tau, BaseDraws base = BaseDraws::StdNormal);

  int sample_dim() const override { return static_cast<int>(spectrum_.size()); }
  int param_dim() const override { return static_cast<int>(spectrum_.size()); }
  BaseDraws base() const override { return base_; }

  double value(const Eigen::VectorXd& z,
               const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& z,
                           const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd hess_vec(const Eigen::VectorXd& z,
                           const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& v) const override;
  void batch_value_grad(const Eigen::MatrixXd& Z, const Eigen::VectorXd& theta,
                        double& f_mean, Eigen::VectorXd& g_mean) const override;
  Eigen::VectorXd batch_hess_vec(const Eigen::MatrixXd& Z,
                                 const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& v) const override;

  bool has_optimum() const override { return true; }
  Eigen::VectorXd optimum() const override { return theta_star_; }
  bool has_objective() const override { return true; }
  double objective(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& theta) const override;

  double strong_convexity() const { return spectrum_.minCoeff(); }
  double smoothness() const { return spectrum_.maxCoeff(); }
  double tau() const { return tau_; }

 private:
  Eigen::MatrixXd psi(const Eigen::MatrixXd& Z) const;

  Eigen::VectorXd spectrum_;
  Eigen::VectorXd theta_star_;
  double tau_;
  BaseDraws base_;
};

}  // namespace qmcopt
