#include "graphsum/matrix.hpp"

#include <cmath>

#include "graphsum/errors.hpp"

namespace graphsum {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) {
    return Matrix();
  }
  const std::size_t cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw DimensionError("Matrix::from_rows: ragged input, row 0 has " +
                           std::to_string(cols) + " entries but row " + std::to_string(r) +
                           " has " + std::to_string(rows[r].size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

Matrix Matrix::column(const std::vector<double>& values) {
  Matrix m(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(i, 0) = values[i];
  }
  return m;
}

std::vector<double> Matrix::row_copy(std::size_t r) const {
  return std::vector<double>(row_ptr(r), row_ptr(r) + cols_);
}

std::string Matrix::shape_str() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

void require_same_shape(const Matrix& a, const Matrix& b, const std::string& op) {
  if (!a.same_shape(b)) {
    throw DimensionError(op + ": shape mismatch (" + a.shape_str() + " vs " + b.shape_str() +
                         ")");
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions disagree (" + a.shape_str() + " vs " +
                         b.shape_str() + ")");
  }
  Matrix out(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in both b and out.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out_row = out.row_ptr(i);
    const double* a_row = a.row_ptr(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a_row[k];
      if (aik == 0.0) {
        continue;
      }
      const double* b_row = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out_row[j] += aik * b_row[j];
      }
    }
  }
  return out;
}

Matrix matmul_grad_lhs(const Matrix& d_out, const Matrix& rhs) {
  return matmul(d_out, transpose(rhs));
}

Matrix matmul_grad_rhs(const Matrix& lhs, const Matrix& d_out) {
  return matmul(transpose(lhs), d_out);
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = a(i, j);
    }
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] += b.data()[i];
  }
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] -= b.data()[i];
  }
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] *= b.data()[i];
  }
  return out;
}

Matrix scale(const Matrix& a, double s) {
  Matrix out = a;
  scale_in_place(out, s);
  return out;
}

void add_in_place(Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add_in_place");
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.data()[i] += b.data()[i];
  }
}

void scale_in_place(Matrix& a, double s) {
  for (double& v : a.data()) {
    v *= s;
  }
}

double dot(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += a.data()[i] * b.data()[i];
  }
  return acc;
}

double frobenius_norm(const Matrix& a) { return std::sqrt(dot(a, a)); }

namespace {

double sigmoid(double x) {
  // Split on sign so the exp argument is always non-positive; no overflow.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Matrix activate(const Matrix& x, Activation kind) {
  Matrix out = x;
  switch (kind) {
    case Activation::Tanh:
      for (double& v : out.data()) v = std::tanh(v);
      break;
    case Activation::Sigmoid:
      for (double& v : out.data()) v = sigmoid(v);
      break;
    case Activation::Relu:
      for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
      break;
  }
  return out;
}

Matrix activate_grad_from_output(const Matrix& y, Activation kind) {
  Matrix out = y;
  switch (kind) {
    case Activation::Tanh:
      for (double& v : out.data()) v = 1.0 - v * v;
      break;
    case Activation::Sigmoid:
      for (double& v : out.data()) v = v * (1.0 - v);
      break;
    case Activation::Relu:
      for (double& v : out.data()) v = v > 0.0 ? 1.0 : 0.0;
      break;
  }
  return out;
}

Matrix softmax_rows(const Matrix& x) {
  if (x.cols() == 0) {
    throw PreconditionError("softmax_rows: needs at least one column");
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* in_row = x.row_ptr(i);
    double* out_row = out.row_ptr(i);
    double row_max = in_row[0];
    for (std::size_t j = 1; j < x.cols(); ++j) {
      row_max = std::max(row_max, in_row[j]);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out_row[j] = std::exp(in_row[j] - row_max);
      total += out_row[j];
    }
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out_row[j] /= total;
    }
  }
  return out;
}

Matrix softmax_rows_backward(const Matrix& y, const Matrix& dy) {
  require_same_shape(y, dy, "softmax_rows_backward");
  Matrix dx(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const double* yr = y.row_ptr(i);
    const double* dyr = dy.row_ptr(i);
    double* dxr = dx.row_ptr(i);
    double inner = 0.0;
    for (std::size_t j = 0; j < y.cols(); ++j) {
      inner += dyr[j] * yr[j];
    }
    for (std::size_t j = 0; j < y.cols(); ++j) {
      dxr[j] = (dyr[j] - inner) * yr[j];
    }
  }
  return dx;
}

bool all_finite(const Matrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

void check_finite(const Matrix& a, const std::string& what) {
  if (!all_finite(a)) {
    throw NumericError(what + ": non-finite value encountered");
  }
}

}  // namespace graphsum
