#include "sagail/mat.hpp"

#include <cmath>
#include <stdexcept>

namespace sagail {

Mat Mat::from_rows(const std::vector<Vec>& rows_in) {
  if (rows_in.empty()) return Mat();
  Mat m(static_cast<int>(rows_in.size()), static_cast<int>(rows_in[0].size()));
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(rows_in[r].size()) != m.cols)
      throw std::invalid_argument("Mat::from_rows: ragged input");
    std::copy(rows_in[r].begin(), rows_in[r].end(), m.a.begin() + static_cast<size_t>(r) * m.cols);
  }
  return m;
}

void matmul_nt(const Mat& A, const Mat& B, Mat& C) {
  if (A.cols != B.cols) throw std::invalid_argument("matmul_nt: inner dimensions disagree");
  C = Mat(A.rows, B.rows);
  for (int i = 0; i < A.rows; ++i) {
    const double* ai = A.a.data() + static_cast<size_t>(i) * A.cols;
    double* ci = C.a.data() + static_cast<size_t>(i) * C.cols;
    for (int j = 0; j < B.rows; ++j) {
      const double* bj = B.a.data() + static_cast<size_t>(j) * B.cols;
      double s = 0.0;
      for (int k = 0; k < A.cols; ++k) s += ai[k] * bj[k];
      ci[j] = s;
    }
  }
}

void matmul_nn(const Mat& A, const Mat& B, Mat& C) {
  if (A.cols != B.rows) throw std::invalid_argument("matmul_nn: inner dimensions disagree");
  C = Mat(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    const double* ai = A.a.data() + static_cast<size_t>(i) * A.cols;
    double* ci = C.a.data() + static_cast<size_t>(i) * C.cols;
    for (int k = 0; k < A.cols; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = B.a.data() + static_cast<size_t>(k) * B.cols;
      for (int j = 0; j < B.cols; ++j) ci[j] += aik * bk[j];
    }
  }
}

void matmul_tn(const Mat& A, const Mat& B, Mat& C) {
  if (A.rows != B.rows) throw std::invalid_argument("matmul_tn: inner dimensions disagree");
  C = Mat(A.cols, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    const double* ai = A.a.data() + static_cast<size_t>(i) * A.cols;
    const double* bi = B.a.data() + static_cast<size_t>(i) * B.cols;
    for (int j = 0; j < A.cols; ++j) {
      const double aij = ai[j];
      if (aij == 0.0) continue;
      double* cj = C.a.data() + static_cast<size_t>(j) * C.cols;
      for (int k = 0; k < B.cols; ++k) cj[k] += aij * bi[k];
    }
  }
}

void add_row_vector(Mat& Z, const Vec& b) {
  if (static_cast<int>(b.size()) != Z.cols)
    throw std::invalid_argument("add_row_vector: width mismatch");
  for (int i = 0; i < Z.rows; ++i) {
    double* zi = Z.a.data() + static_cast<size_t>(i) * Z.cols;
    for (int j = 0; j < Z.cols; ++j) zi[j] += b[j];
  }
}

void col_sums(const Mat& Z, Vec& out) {
  out.assign(Z.cols, 0.0);
  for (int i = 0; i < Z.rows; ++i) {
    const double* zi = Z.a.data() + static_cast<size_t>(i) * Z.cols;
    for (int j = 0; j < Z.cols; ++j) out[j] += zi[j];
  }
}

bool all_finite(std::span<const double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace sagail
