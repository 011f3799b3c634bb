#include "qmcopt/estimators.hpp"

#include <cmath>
#include <string>

namespace qmcopt {

Eigen::MatrixXd base_draws(const VBProblem& model, const SampleBatch& batch) {
  if (batch.dim() != model.sample_dim())
    throw std::invalid_argument(
        "base_draws: batch has " + std::to_string(batch.dim()) +
        " columns, model needs " + std::to_string(model.sample_dim()));
  if (model.base() == BaseDraws::Uniform01) return batch.points;
  return to_normal(batch);
}

void evaluate_batch(const VBProblem& model, const Eigen::MatrixXd& Z,
                    const Eigen::VectorXd& theta, double& f_mean,
                    Eigen::VectorXd& g_mean) {
  if (theta.size() != model.param_dim())
    throw std::invalid_argument("evaluate_batch: theta has wrong dimension");
  model.batch_value_grad(Z, theta, f_mean, g_mean);
  if (!std::isfinite(f_mean) || !g_mean.allFinite())
    throw NonFiniteError("non-finite batch objective or gradient");
}

GradientSample mean_gradient(const VBProblem& model, const SampleBatch& batch,
                             const Eigen::VectorXd& theta) {
  if (batch.n() < 1)
    throw std::invalid_argument("mean_gradient: empty batch");
  GradientSample out;
  double f = 0.0;
  evaluate_batch(model, base_draws(model, batch), theta, f, out.gradient);
  out.elbo_estimate = -f;
  out.iteration = batch.iteration;
  return out;
}

Eigen::VectorXd hessian_vector_product(const VBProblem& model,
                                       const SampleBatch& batch,
                                       const Eigen::VectorXd& theta,
                                       const Eigen::VectorXd& dir) {
  if (batch.n() < 1)
    throw std::invalid_argument("hessian_vector_product: empty batch");
  if (dir.size() != model.param_dim())
    throw std::invalid_argument("hessian_vector_product: bad direction size");
  const Eigen::VectorXd out =
      model.batch_hess_vec(base_draws(model, batch), theta, dir);
  if (!out.allFinite())
    throw NonFiniteError("non-finite Hessian-vector product");
  return out;
}

double variance_trace(const VBProblem& model, const SamplerFactory& make_sampler,
                      const Eigen::VectorXd& theta, int n, int reps) {
  if (reps < 2)
    throw std::invalid_argument("variance_trace: need at least 2 replicates");
  Eigen::MatrixXd grads(model.param_dim(), reps);
  for (int r = 0; r < reps; ++r) {
    auto sampler = make_sampler(static_cast<std::uint64_t>(r));
    SampleBatch batch = sampler->draw(n);
    grads.col(r) = mean_gradient(model, batch, theta).gradient;
  }
  const Eigen::VectorXd mean = grads.rowwise().mean();
  return (grads.colwise() - mean).squaredNorm() /
         static_cast<double>(reps - 1);
}

}  // namespace qmcopt
