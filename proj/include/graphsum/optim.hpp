#ifndef GRAPHSUM_OPTIM_HPP
#define GRAPHSUM_OPTIM_HPP

#include <functional>
#include <string>
#include <vector>

#include "graphsum/matrix.hpp"
#include "graphsum/rng.hpp"

namespace graphsum {

/// A trainable matrix together with its gradient accumulator and Adam
/// moment estimates. All four matrices share one shape; moments stay zero
/// until the first optimizer step.
struct ParamTensor {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix moment1;
  Matrix moment2;
  std::size_t steps = 0;

  ParamTensor() = default;
  ParamTensor(std::string param_name, Matrix initial);

  void zero_grad();
  std::size_t rows() const { return value.rows(); }
  std::size_t cols() const { return value.cols(); }
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One bias-corrected Adam update from the accumulated gradient. Increments
/// the step count and clears the gradient. Throws NumericError naming the
/// parameter if the gradient holds non-finite values.
void adam_step(ParamTensor& p, const AdamConfig& cfg);

/// Glorot-uniform initial value: entries ~ U(-l, l), l = sqrt(6/(fan_in+fan_out)).
Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);

/// Central finite-difference check of p.grad against loss(). The caller runs
/// forward+backward once so p.grad holds the analytic gradient; loss() must
/// re-evaluate the objective from p.value without touching gradients.
/// Returns the worst per-coordinate relative error, where the comparison
/// denominator is floored at 1e-3 so coordinates with near-zero gradient are
/// judged on absolute error instead of amplified noise.
double grad_check(const std::function<double()>& loss, ParamTensor& p, double h);

/// Worst grad_check result over several parameters sharing one loss.
double grad_check_all(const std::function<double()>& loss, const std::vector<ParamTensor*>& params,
                      double h);

}  // namespace graphsum

#endif  // GRAPHSUM_OPTIM_HPP
