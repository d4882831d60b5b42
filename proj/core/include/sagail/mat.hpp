#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sagail {

using Vec = std::vector<double>;

// Dense row-major matrix. Just enough linear algebra for MLP training.
struct Mat {
  int rows = 0;
  int cols = 0;
  Vec a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  std::span<double> row(int r) { return {a.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {a.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }

  size_t size() const { return a.size(); }
  void fill(double v) { std::fill(a.begin(), a.end(), v); }

  static Mat from_rows(const std::vector<Vec>& rows_in);
};

// C = A * B^T   (A: m x k, B: n x k, C: m x n)
void matmul_nt(const Mat& A, const Mat& B, Mat& C);
// C = A * B     (A: m x k, B: k x n, C: m x n)
void matmul_nn(const Mat& A, const Mat& B, Mat& C);
// C = A^T * B   (A: k x m, B: k x n, C: m x n)
void matmul_tn(const Mat& A, const Mat& B, Mat& C);

// Adds the row vector b to every row of Z.
void add_row_vector(Mat& Z, const Vec& b);
// out[j] = sum over rows of Z(:, j)
void col_sums(const Mat& Z, Vec& out);

bool all_finite(std::span<const double> xs);

}  // namespace sagail
