#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>

#include "qmcopt/models.hpp"
#include "qmcopt/sobol.hpp"

namespace qmcopt {

// Raised when an estimate comes back with inf or NaN entries, which signals
// the model blowing up at the current iterate.
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GradientSample {
  Eigen::VectorXd gradient;     // mean gradient of f over the batch
  double elbo_estimate = 0.0;   // -mean f over the batch
  std::int64_t iteration = 0;   // copied from the batch tag
};

// Maps a uniform batch to the draws the problem consumes (inverse normal
// CDF per coordinate for StdNormal problems, pass-through for Uniform01).
Eigen::MatrixXd base_draws(const VBProblem& model, const SampleBatch& batch);

// Batch means of f and its gradient at theta over already-transformed
// draws; throws NonFiniteError if either comes back non-finite.
void evaluate_batch(const VBProblem& model, const Eigen::MatrixXd& Z,
                    const Eigen::VectorXd& theta, double& f_mean,
                    Eigen::VectorXd& g_mean);

GradientSample mean_gradient(const VBProblem& model, const SampleBatch& batch,
                             const Eigen::VectorXd& theta);

// Mean Hessian-vector product over the batch.
Eigen::VectorXd hessian_vector_product(const VBProblem& model,
                                       const SampleBatch& batch,
                                       const Eigen::VectorXd& theta,
                                       const Eigen::VectorXd& dir);

using SamplerFactory =
    std::function<std::unique_ptr<BatchSampler>(std::uint64_t)>;

// Trace of the empirical covariance of the mean gradient across `reps`
// independent replicates of batch size n. The factory receives the
// replicate index as its seed stream.
double variance_trace(const VBProblem& model, const SamplerFactory& make_sampler,
                      const Eigen::VectorXd& theta, int n, int reps);

}  // namespace qmcopt
