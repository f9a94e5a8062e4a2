#ifndef GRAPHSUM_MATRIX_HPP
#define GRAPHSUM_MATRIX_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace graphsum {

/// Dense row-major matrix of 64-bit reals. Values are plain data; all
/// arithmetic lives in free functions so gradient rules can sit next to
/// the forward ops they belong to.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  /// d x 1 column vector.
  static Matrix column(const std::vector<double>& values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
  double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  std::vector<double> row_copy(std::size_t r) const;

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string shape_str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Standard product; throws DimensionError naming both shapes on mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Gradient of matmul w.r.t. its left operand: dA = dOut * B^T.
Matrix matmul_grad_lhs(const Matrix& d_out, const Matrix& rhs);
/// Gradient of matmul w.r.t. its right operand: dB = A^T * dOut.
Matrix matmul_grad_rhs(const Matrix& lhs, const Matrix& d_out);

Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
void add_in_place(Matrix& a, const Matrix& b);
void scale_in_place(Matrix& a, double s);

/// Sum of elementwise products over identically shaped matrices.
double dot(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);

enum class Activation { Tanh, Sigmoid, Relu };

Matrix activate(const Matrix& x, Activation kind);
/// Derivative of the activation expressed through its own output, as an
/// elementwise factor: tanh -> 1 - y^2, sigmoid -> y(1-y), relu -> [y > 0].
Matrix activate_grad_from_output(const Matrix& y, Activation kind);

/// Row-wise softmax with max-subtraction; rows sum to 1 within 1e-12.
Matrix softmax_rows(const Matrix& x);
/// Backward rule: dX_row = (dY - <dY, Y>) * Y per row.
Matrix softmax_rows_backward(const Matrix& y, const Matrix& dy);

bool all_finite(const Matrix& a);
/// Throws NumericError mentioning `what` if any entry is NaN or Inf.
void check_finite(const Matrix& a, const std::string& what);

void require_same_shape(const Matrix& a, const Matrix& b, const std::string& op);

}  // namespace graphsum

#endif  // GRAPHSUM_MATRIX_HPP
