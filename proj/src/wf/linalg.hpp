#pragma once

#include <vector>

#include "wf/common.hpp"

namespace wf {

// Small dense row-major matrices, real and complex. Dimensions here are desk
// scale (d x d geometry matrices up to a few thousand square Gram matrices);
// decompositions are delegated to Eigen.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[size_t(i) * cols + j]; }

  static Mat identity(int n);
  static Mat scalar(int n, double s);
  static Mat rotation2d(double angle);
};

Mat mat_mul(const Mat& A, const Mat& B);
Mat mat_transpose(const Mat& A);
Mat mat_inverse(const Mat& A);
Mat mat_pow(const Mat& A, int k);  // negative k uses the inverse
double mat_det(const Mat& A);
double mat_norm_fro(const Mat& A);
std::vector<double> mat_apply(const Mat& A, const std::vector<double>& x);

// Moduli of the eigenvalues of a general real square matrix.
std::vector<double> eigenvalue_moduli(const Mat& A);

struct CMat {
  int rows = 0, cols = 0;
  std::vector<cplx> a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, cplx(0.0, 0.0)) {}
  cplx& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  cplx operator()(int i, int j) const { return a[size_t(i) * cols + j]; }
};

struct HermitianEig {
  std::vector<double> values;  // ascending
  CMat vectors;                // columns; empty when not requested
};

HermitianEig hermitian_eig(const CMat& G, bool want_vectors);

// Pseudo-inverse of a Hermitian PSD matrix with relative eigenvalue cutoff.
// Returns G^+ and reports the retained rank and extreme retained eigenvalues.
struct PinvResult {
  CMat pinv;
  int rank = 0;
  double eig_min_retained = 0.0;
  double eig_max = 0.0;
};
PinvResult hermitian_pinv(const CMat& G, double rel_cutoff);

// Conjugate gradient for Hermitian PSD G x = b (least-squares solution when G
// is singular and b lies in its range). Returns achieved relative residual.
double cg_solve(const CMat& G, const std::vector<cplx>& b, std::vector<cplx>& x,
                double rel_tol, int max_iter);

std::vector<cplx> cmat_apply(const CMat& A, const std::vector<cplx>& x);

}  // namespace wf
