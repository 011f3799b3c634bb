#include "qmcopt/models.hpp"

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

namespace qmcopt {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double softplus(double x) {
  // log(1 + e^x) without overflow on either side
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Deterministic draws for synthetic data, independent of std distributions.
class NormalGen {
 public:
  explicit NormalGen(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double normal() { return inv_normal_cdf(uniform()); }
  Eigen::MatrixXd normal_matrix(int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = normal();
    return m;
  }
  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

double kl_standard_normal(const DiagGaussian& q) {
  const auto s2 = (2.0 * q.log_sigma.array()).exp();
  return (0.5 * (s2 + q.mu.array().square() - 1.0) - q.log_sigma.array()).sum();
}

Eigen::VectorXd kl_standard_normal_grad(const DiagGaussian& q) {
  const int d = q.dim();
  Eigen::VectorXd g(2 * d);
  g.head(d) = q.mu;
  g.tail(d) = ((2.0 * q.log_sigma.array()).exp() - 1.0).matrix();
  return g;
}

void VBProblem::batch_value_grad(const Eigen::MatrixXd& Z,
                                 const Eigen::VectorXd& theta, double& f_mean,
                                 Eigen::VectorXd& g_mean) const {
  const Eigen::Index n = Z.rows();
  f_mean = 0.0;
  g_mean = Eigen::VectorXd::Zero(param_dim());
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::VectorXd z = Z.row(r).transpose();
    f_mean += value(z, theta);
    g_mean += gradient(z, theta);
  }
  f_mean /= static_cast<double>(n);
  g_mean /= static_cast<double>(n);
}

Eigen::VectorXd VBProblem::batch_hess_vec(const Eigen::MatrixXd& Z,
                                          const Eigen::VectorXd& theta,
                                          const Eigen::VectorXd& v) const {
  const Eigen::Index n = Z.rows();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(param_dim());
  for (Eigen::Index r = 0; r < n; ++r)
    out += hess_vec(Z.row(r).transpose(), theta, v);
  return out / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// ReparamVBModel chain rule

double ReparamVBModel::value(const Eigen::VectorXd& z,
                             const Eigen::VectorXd& theta) const {
  const DiagGaussian q = unpack_theta(theta);
  return phi(reparameterize(z, q)) + d_value(theta);
}

Eigen::VectorXd ReparamVBModel::gradient(const Eigen::VectorXd& z,
                                         const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const Eigen::ArrayXd s = q.log_sigma.array().exp() * z.array();
  const Eigen::VectorXd zeta = (q.mu.array() + s).matrix();
  const Eigen::VectorXd gl = phi_grad(zeta);
  Eigen::VectorXd out(2 * d);
  out.head(d) = gl;
  out.tail(d) = (gl.array() * s).matrix();
  return out + d_grad(theta);
}

Eigen::VectorXd ReparamVBModel::hess_vec(const Eigen::VectorXd& z,
                                         const Eigen::VectorXd& theta,
                                         const Eigen::VectorXd& v) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const Eigen::ArrayXd s = q.log_sigma.array().exp() * z.array();
  const Eigen::VectorXd zeta = (q.mu.array() + s).matrix();
  const Eigen::ArrayXd vmu = v.head(d).array();
  const Eigen::ArrayXd vls = v.tail(d).array();
  const Eigen::VectorXd u = (vmu + s * vls).matrix();
  const Eigen::ArrayXd w = phi_hess_vec(zeta, u).array();
  const Eigen::ArrayXd gl = phi_grad(zeta).array();
  Eigen::VectorXd out(2 * d);
  out.head(d) = w.matrix();
  out.tail(d) = (s * w + gl * s * vls).matrix();
  return out + (d_hess_diag(theta).array() * v.array()).matrix();
}

// ---------------------------------------------------------------------------
// linear regression

LinRegData make_linreg_data(int n_obs, int d, double gamma,
                            std::uint64_t seed) {
  NormalGen gen(seed);
  LinRegData data;
  data.gamma = gamma;
  data.X = gen.normal_matrix(n_obs, d);
  const Eigen::VectorXd beta = gen.normal_vector(d);
  data.y = data.X * beta + gamma * gen.normal_vector(n_obs);
  return data;
}

LinRegModel::LinRegModel(LinRegData data) : data_(std::move(data)) {
  const double g2 = data_.gamma * data_.gamma;
  xtx_ = data_.X.transpose() * data_.X / g2;
  xty_ = data_.X.transpose() * data_.y / g2;
  col_sq_ = data_.X.colwise().squaredNorm().transpose();
  log_norm_ = 0.5 * static_cast<double>(data_.X.rows()) *
              (kLog2Pi + 2.0 * std::log(data_.gamma));
}

double LinRegModel::phi(const Eigen::VectorXd& zeta) const {
  const Eigen::VectorXd r = data_.X * zeta - data_.y;
  return log_norm_ + 0.5 * r.squaredNorm() / (data_.gamma * data_.gamma);
}

Eigen::VectorXd LinRegModel::phi_grad(const Eigen::VectorXd& zeta) const {
  return xtx_ * zeta - xty_;
}

Eigen::VectorXd LinRegModel::phi_hess_vec(const Eigen::VectorXd&,
                                          const Eigen::VectorXd& w) const {
  return xtx_ * w;
}

double LinRegModel::d_value(const Eigen::VectorXd& theta) const {
  return kl_standard_normal(unpack_theta(theta));
}

Eigen::VectorXd LinRegModel::d_grad(const Eigen::VectorXd& theta) const {
  return kl_standard_normal_grad(unpack_theta(theta));
}

Eigen::VectorXd LinRegModel::d_hess_diag(const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  Eigen::VectorXd h(2 * d);
  h.head(d).setOnes();
  h.tail(d) = (2.0 * (2.0 * theta.tail(d).array()).exp()).matrix();
  return h;
}

Eigen::VectorXd LinRegModel::optimum() const {
  const int d = latent_dim();
  const Eigen::MatrixXd prec =
      xtx_ + Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd mu = prec.ldlt().solve(xty_);
  const double g2 = data_.gamma * data_.gamma;
  Eigen::VectorXd theta(2 * d);
  theta.head(d) = mu;
  theta.tail(d) = (-0.5 * (col_sq_.array() / g2).log1p()).matrix();
  return theta;
}

double LinRegModel::objective(const Eigen::VectorXd& theta) const {
  const DiagGaussian q = unpack_theta(theta);
  const double g2 = data_.gamma * data_.gamma;
  const Eigen::ArrayXd s2 = (2.0 * q.log_sigma.array()).exp();
  const double fit = (data_.X * q.mu - data_.y).squaredNorm();
  const double spread = (s2 * col_sq_.array()).sum();
  return log_norm_ + 0.5 * (fit + spread) / g2 + kl_standard_normal(q);
}

Eigen::VectorXd LinRegModel::objective_gradient(
    const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const double g2 = data_.gamma * data_.gamma;
  const Eigen::ArrayXd s2 = (2.0 * q.log_sigma.array()).exp();
  Eigen::VectorXd g(2 * d);
  g.head(d) = xtx_ * q.mu - xty_ + q.mu;
  g.tail(d) = (s2 * col_sq_.array() / g2 + s2 - 1.0).matrix();
  return g;
}

void LinRegModel::batch_value_grad(const Eigen::MatrixXd& Z,
                                   const Eigen::VectorXd& theta, double& f_mean,
                                   Eigen::VectorXd& g_mean) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const double g2 = data_.gamma * data_.gamma;
  const Eigen::ArrayXd sigma = q.log_sigma.array().exp();
  // columns are per-sample latents
  Eigen::MatrixXd S = Z.transpose();
  S.array().colwise() *= sigma;
  Eigen::MatrixXd B = S;
  B.colwise() += q.mu;
  const Eigen::MatrixXd G = (xtx_ * B).colwise() - xty_;
  const double y2 = data_.y.squaredNorm() / g2;
  // ||X b - y||^2 / g2 = b'(X'X/g2)b - 2 (X'y/g2)'b + y'y/g2
  const Eigen::ArrayXd quad = (B.array() * G.array()).colwise().sum().transpose();
  const Eigen::ArrayXd lin = (xty_.transpose() * B).array().transpose();
  f_mean = log_norm_ + 0.5 * (quad - lin + y2).mean() + d_value(theta);
  Eigen::VectorXd g(2 * d);
  g.head(d) = G.rowwise().mean();
  g.tail(d) = (G.array() * S.array()).rowwise().mean().matrix();
  g_mean = g + d_grad(theta);
}

Eigen::VectorXd LinRegModel::batch_hess_vec(const Eigen::MatrixXd& Z,
                                            const Eigen::VectorXd& theta,
                                            const Eigen::VectorXd& v) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const Eigen::ArrayXd sigma = q.log_sigma.array().exp();
  const Eigen::ArrayXd vmu = v.head(d).array();
  const Eigen::ArrayXd vls = v.tail(d).array();
  Eigen::MatrixXd S = Z.transpose();
  S.array().colwise() *= sigma;
  Eigen::MatrixXd B = S;
  B.colwise() += q.mu;
  const Eigen::MatrixXd G = (xtx_ * B).colwise() - xty_;
  Eigen::MatrixXd U = S;
  U.array().colwise() *= vls;
  U.array().colwise() += vmu;
  const Eigen::MatrixXd W = xtx_ * U;
  Eigen::VectorXd out(2 * d);
  out.head(d) = W.rowwise().mean();
  out.tail(d) = ((S.array() * W.array()).rowwise().mean() +
                 (G.array() * S.array()).rowwise().mean() * vls)
                    .matrix();
  return out + (d_hess_diag(theta).array() * v.array()).matrix();
}

// ---------------------------------------------------------------------------
// logistic regression

LogRegData make_logreg_data(int n_obs, int d, std::uint64_t seed) {
  NormalGen gen(seed);
  LogRegData data;
  data.X = gen.normal_matrix(n_obs, d);
  const Eigen::VectorXd beta =
      gen.normal_vector(d) / std::sqrt(static_cast<double>(n_obs));
  data.y.resize(n_obs);
  for (int i = 0; i < n_obs; ++i) {
    const double p = sigmoid(data.X.row(i).dot(beta));
    data.y(i) = gen.uniform() < p ? 1.0 : -1.0;
  }
  return data;
}

LogRegModel::LogRegModel(LogRegData data) : data_(std::move(data)) {
  for (Eigen::Index i = 0; i < data_.y.size(); ++i)
    if (data_.y(i) != 1.0 && data_.y(i) != -1.0)
      throw std::invalid_argument("LogRegModel: labels must be -1 or +1");
}

double LogRegModel::phi(const Eigen::VectorXd& zeta) const {
  const Eigen::ArrayXd u = (data_.X * zeta).array() * data_.y.array();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) sum += softplus(-u(i));
  return sum;
}

Eigen::VectorXd LogRegModel::phi_grad(const Eigen::VectorXd& zeta) const {
  const Eigen::ArrayXd u = (data_.X * zeta).array() * data_.y.array();
  Eigen::ArrayXd p(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) p(i) = sigmoid(-u(i));
  return -(data_.X.transpose() * (p * data_.y.array()).matrix());
}

Eigen::VectorXd LogRegModel::phi_hess_vec(const Eigen::VectorXd& zeta,
                                          const Eigen::VectorXd& w) const {
  const Eigen::ArrayXd u = (data_.X * zeta).array() * data_.y.array();
  Eigen::ArrayXd dcurv(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double p = sigmoid(-u(i));
    dcurv(i) = p * (1.0 - p);
  }
  return data_.X.transpose() * (dcurv * (data_.X * w).array()).matrix();
}

double LogRegModel::d_value(const Eigen::VectorXd& theta) const {
  return kl_standard_normal(unpack_theta(theta));
}

Eigen::VectorXd LogRegModel::d_grad(const Eigen::VectorXd& theta) const {
  return kl_standard_normal_grad(unpack_theta(theta));
}

Eigen::VectorXd LogRegModel::d_hess_diag(const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  Eigen::VectorXd h(2 * d);
  h.head(d).setOnes();
  h.tail(d) = (2.0 * (2.0 * theta.tail(d).array()).exp()).matrix();
  return h;
}

void LogRegModel::batch_value_grad(const Eigen::MatrixXd& Z,
                                   const Eigen::VectorXd& theta, double& f_mean,
                                   Eigen::VectorXd& g_mean) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const Eigen::ArrayXd sigma = q.log_sigma.array().exp();
  Eigen::MatrixXd S = Z.transpose();
  S.array().colwise() *= sigma;
  Eigen::MatrixXd B = S;
  B.colwise() += q.mu;
  Eigen::ArrayXXd U = (data_.X * B).array();
  U.colwise() *= data_.y.array();
  Eigen::ArrayXXd P(U.rows(), U.cols());
  double fsum = 0.0;
  for (Eigen::Index c = 0; c < U.cols(); ++c)
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
      fsum += softplus(-U(i, c));
      P(i, c) = sigmoid(-U(i, c));
    }
  P.colwise() *= data_.y.array();
  const Eigen::MatrixXd G = -(data_.X.transpose() * P.matrix());
  const double n = static_cast<double>(Z.rows());
  f_mean = fsum / n + d_value(theta);
  Eigen::VectorXd g(2 * d);
  g.head(d) = G.rowwise().mean();
  g.tail(d) = (G.array() * S.array()).rowwise().mean().matrix();
  g_mean = g + d_grad(theta);
}

Eigen::VectorXd LogRegModel::batch_hess_vec(const Eigen::MatrixXd& Z,
                                            const Eigen::VectorXd& theta,
                                            const Eigen::VectorXd& v) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  const Eigen::ArrayXd sigma = q.log_sigma.array().exp();
  const Eigen::ArrayXd vmu = v.head(d).array();
  const Eigen::ArrayXd vls = v.tail(d).array();
  Eigen::MatrixXd S = Z.transpose();
  S.array().colwise() *= sigma;
  Eigen::MatrixXd B = S;
  B.colwise() += q.mu;
  Eigen::ArrayXXd U = (data_.X * B).array();
  U.colwise() *= data_.y.array();
  Eigen::ArrayXXd P(U.rows(), U.cols());
  for (Eigen::Index c = 0; c < U.cols(); ++c)
    for (Eigen::Index i = 0; i < U.rows(); ++i) P(i, c) = sigmoid(-U(i, c));
  const Eigen::ArrayXXd D = P * (1.0 - P);
  Eigen::ArrayXXd Py = P;
  Py.colwise() *= data_.y.array();
  const Eigen::MatrixXd G = -(data_.X.transpose() * Py.matrix());
  Eigen::MatrixXd Udir = S;
  Udir.array().colwise() *= vls;
  Udir.array().colwise() += vmu;
  const Eigen::MatrixXd V = data_.X * Udir;
  const Eigen::MatrixXd W = data_.X.transpose() * (D * V.array()).matrix();
  Eigen::VectorXd out(2 * d);
  out.head(d) = W.rowwise().mean();
  out.tail(d) = ((S.array() * W.array()).rowwise().mean() +
                 (G.array() * S.array()).rowwise().mean() * vls)
                    .matrix();
  return out + (d_hess_diag(theta).array() * v.array()).matrix();
}

// ---------------------------------------------------------------------------
// crossed random effects

CrossedData make_crossed_data(int n_rows, int n_cols, std::uint64_t seed) {
  NormalGen gen(seed);
  CrossedData data;
  const double mu = gen.normal();
  const double sigma_a = std::exp(gen.normal());
  const double sigma_b = std::exp(gen.normal());
  const Eigen::VectorXd a = sigma_a * gen.normal_vector(n_rows);
  const Eigen::VectorXd b = sigma_b * gen.normal_vector(n_cols);
  data.Y.resize(n_rows, n_cols);
  for (int i = 0; i < n_rows; ++i)
    for (int j = 0; j < n_cols; ++j)
      data.Y(i, j) = mu + a(i) + b(j) + gen.normal();
  return data;
}

CrossedModel::CrossedModel(CrossedData data)
    : data_(std::move(data)),
      n_rows_(static_cast<int>(data_.Y.rows())),
      n_cols_(static_cast<int>(data_.Y.cols())) {}

double CrossedModel::phi(const Eigen::VectorXd& zeta) const {
  const int I = n_rows_, J = n_cols_;
  const double mu = zeta(0), la = zeta(1), lb = zeta(2);
  const auto a = zeta.segment(3, I).array();
  const auto b = zeta.segment(3 + I, J).array();
  const double ea = std::exp(-2.0 * la), eb = std::exp(-2.0 * lb);
  double like = 0.0;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      const double r = mu + a(i) + b(j) - data_.Y(i, j);
      like += 0.5 * (kLog2Pi + r * r);
    }
  const double pa = I * (0.5 * kLog2Pi + la) + 0.5 * ea * a.square().sum();
  const double pb = J * (0.5 * kLog2Pi + lb) + 0.5 * eb * b.square().sum();
  return like + pa + pb;
}

Eigen::VectorXd CrossedModel::phi_grad(const Eigen::VectorXd& zeta) const {
  const int I = n_rows_, J = n_cols_;
  const double mu = zeta(0), la = zeta(1), lb = zeta(2);
  const auto a = zeta.segment(3, I).array();
  const auto b = zeta.segment(3 + I, J).array();
  const double ea = std::exp(-2.0 * la), eb = std::exp(-2.0 * lb);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(zeta.size());
  Eigen::ArrayXd row_sum = Eigen::ArrayXd::Zero(I);  // sum_j r_ij
  Eigen::ArrayXd col_sum = Eigen::ArrayXd::Zero(J);  // sum_i r_ij
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      const double r = mu + a(i) + b(j) - data_.Y(i, j);
      row_sum(i) += r;
      col_sum(j) += r;
    }
  g(0) = row_sum.sum();
  g(1) = static_cast<double>(I) - ea * a.square().sum();
  g(2) = static_cast<double>(J) - eb * b.square().sum();
  g.segment(3, I) = (row_sum + ea * a).matrix();
  g.segment(3 + I, J) = (col_sum + eb * b).matrix();
  return g;
}

Eigen::VectorXd CrossedModel::phi_hess_vec(const Eigen::VectorXd& zeta,
                                           const Eigen::VectorXd& w) const {
  const int I = n_rows_, J = n_cols_;
  const double la = zeta(1), lb = zeta(2);
  const auto a = zeta.segment(3, I).array();
  const auto b = zeta.segment(3 + I, J).array();
  const double ea = std::exp(-2.0 * la), eb = std::exp(-2.0 * lb);
  const double wmu = w(0), wla = w(1), wlb = w(2);
  const auto wa = w.segment(3, I).array();
  const auto wb = w.segment(3 + I, J).array();
  const double sa = wa.sum(), sb = wb.sum();
  Eigen::VectorXd out(w.size());
  out(0) = I * J * wmu + J * sa + I * sb;
  out(1) = 2.0 * ea * (a.square().sum() * wla - (a * wa).sum());
  out(2) = 2.0 * eb * (b.square().sum() * wlb - (b * wb).sum());
  out.segment(3, I) =
      (J * wmu + J * wa + sb + ea * wa - 2.0 * ea * a * wla).matrix();
  out.segment(3 + I, J) =
      (I * wmu + I * wb + sa + eb * wb - 2.0 * eb * b * wlb).matrix();
  return out;
}

double CrossedModel::d_value(const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  double out = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double s2 = std::exp(2.0 * q.log_sigma(k));
    out += 0.5 * (s2 + q.mu(k) * q.mu(k) - 1.0) - q.log_sigma(k);
  }
  for (int k = 3; k < d; ++k)
    out -= 0.5 * (kLog2Pi + 1.0) + q.log_sigma(k);
  return out;
}

Eigen::VectorXd CrossedModel::d_grad(const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  const DiagGaussian q = unpack_theta(theta);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * d);
  for (int k = 0; k < 3; ++k) {
    g(k) = q.mu(k);
    g(d + k) = std::exp(2.0 * q.log_sigma(k)) - 1.0;
  }
  for (int k = 3; k < d; ++k) g(d + k) = -1.0;
  return g;
}

Eigen::VectorXd CrossedModel::d_hess_diag(const Eigen::VectorXd& theta) const {
  const int d = latent_dim();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(2 * d);
  for (int k = 0; k < 3; ++k) {
    h(k) = 1.0;
    h(d + k) = 2.0 * std::exp(2.0 * theta(d + k));
  }
  return h;
}

// ---------------------------------------------------------------------------
// synthetic quadratic

QuadraticProblem::QuadraticProblem(Eigen::VectorXd spectrum,
                                   Eigen::VectorXd theta_star, double tau,
                                   BaseDraws base)
    : spectrum_(std::move(spectrum)),
      theta_star_(std::move(theta_star)),
      tau_(tau),
      base_(base) {
  if (spectrum_.size() != theta_star_.size())
    throw std::invalid_argument("QuadraticProblem: dimension mismatch");
  if (spectrum_.minCoeff() <= 0.0)
    throw std::invalid_argument("QuadraticProblem: spectrum must be positive");
}

Eigen::MatrixXd QuadraticProblem::psi(const Eigen::MatrixXd& Z) const {
  if (base_ == BaseDraws::StdNormal) return Z;
  return (std::sqrt(12.0) * (Z.array() - 0.5)).matrix();
}

double QuadraticProblem::value(const Eigen::VectorXd& z,
                               const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd noise = psi(z.transpose()).transpose();
  return objective(theta) + tau_ * noise.dot(theta);
}

Eigen::VectorXd QuadraticProblem::gradient(const Eigen::VectorXd& z,
                                           const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd noise = psi(z.transpose()).transpose();
  return objective_gradient(theta) + tau_ * noise;
}

Eigen::VectorXd QuadraticProblem::hess_vec(const Eigen::VectorXd&,
                                           const Eigen::VectorXd&,
                                           const Eigen::VectorXd& v) const {
  return (spectrum_.array() * v.array()).matrix();
}

void QuadraticProblem::batch_value_grad(const Eigen::MatrixXd& Z,
                                        const Eigen::VectorXd& theta,
                                        double& f_mean,
                                        Eigen::VectorXd& g_mean) const {
  const Eigen::VectorXd noise = psi(Z).colwise().mean().transpose();
  f_mean = objective(theta) + tau_ * noise.dot(theta);
  g_mean = objective_gradient(theta) + tau_ * noise;
}

Eigen::VectorXd QuadraticProblem::batch_hess_vec(const Eigen::MatrixXd&,
                                                 const Eigen::VectorXd&,
                                                 const Eigen::VectorXd& v) const {
  return (spectrum_.array() * v.array()).matrix();
}

double QuadraticProblem::objective(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd d = theta - theta_star_;
  return 0.5 * (spectrum_.array() * d.array().square()).sum();
}

Eigen::VectorXd QuadraticProblem::objective_gradient(
    const Eigen::VectorXd& theta) const {
  return (spectrum_.array() * (theta - theta_star_).array()).matrix();
}

}  // namespace qmcopt
