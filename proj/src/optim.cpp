#include "graphsum/optim.hpp"

#include <cmath>

#include "graphsum/errors.hpp"

namespace graphsum {

ParamTensor::ParamTensor(std::string param_name, Matrix initial)
    : name(std::move(param_name)),
      value(std::move(initial)),
      grad(value.rows(), value.cols()),
      moment1(value.rows(), value.cols()),
      moment2(value.rows(), value.cols()) {}

void ParamTensor::zero_grad() {
  for (double& g : grad.data()) {
    g = 0.0;
  }
}

void adam_step(ParamTensor& p, const AdamConfig& cfg) {
  if (!all_finite(p.grad)) {
    throw NumericError("adam_step: non-finite gradient for parameter '" + p.name + "'");
  }
  p.steps += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p.steps));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p.steps));
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    const double g = p.grad.data()[i];
    double& m1 = p.moment1.data()[i];
    double& m2 = p.moment2.data()[i];
    m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * g;
    m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * g * g;
    const double m1_hat = m1 / bc1;
    const double m2_hat = m2 / bc2;
    p.value.data()[i] -= cfg.lr * m1_hat / (std::sqrt(m2_hat) + cfg.epsilon);
  }
  p.zero_grad();
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& v : m.data()) {
    v = rng.uniform(-limit, limit);
  }
  return m;
}

double grad_check(const std::function<double()>& loss, ParamTensor& p, double h) {
  if (h <= 0.0) {
    throw PreconditionError("grad_check: step size must be positive");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < p.value.size(); ++i) {
    const double saved = p.value.data()[i];
    p.value.data()[i] = saved + h;
    const double up = loss();
    p.value.data()[i] = saved - h;
    const double down = loss();
    p.value.data()[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = p.grad.data()[i];
    const double denom = std::max({1e-3, std::fabs(numeric), std::fabs(analytic)});
    worst = std::max(worst, std::fabs(numeric - analytic) / denom);
  }
  return worst;
}

double grad_check_all(const std::function<double()>& loss, const std::vector<ParamTensor*>& params,
                      double h) {
  double worst = 0.0;
  for (ParamTensor* p : params) {
    worst = std::max(worst, grad_check(loss, *p, h));
  }
  return worst;
}

}  // namespace graphsum
