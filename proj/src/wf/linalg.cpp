#include "wf/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace wf {

namespace {

Eigen::MatrixXd to_eigen(const Mat& A) {
  Eigen::MatrixXd M(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
  return M;
}

Mat from_eigen(const Eigen::MatrixXd& M) {
  Mat A(int(M.rows()), int(M.cols()));
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) A(i, j) = M(i, j);
  return A;
}

Eigen::MatrixXcd to_eigen(const CMat& A) {
  Eigen::MatrixXcd M(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
  return M;
}

void require_square(const Mat& A, const char* who) {
  if (A.rows != A.cols || A.rows == 0)
    fail(ErrorCode::domain, std::string(who) + ": square matrix required");
}

}  // namespace

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat Mat::scalar(int n, double s) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = s;
  return I;
}

Mat Mat::rotation2d(double angle) {
  Mat R(2, 2);
  R(0, 0) = std::cos(angle);
  R(0, 1) = -std::sin(angle);
  R(1, 0) = std::sin(angle);
  R(1, 1) = std::cos(angle);
  return R;
}

Mat mat_mul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows) fail(ErrorCode::domain, "mat_mul: shape mismatch");
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A(i, k);
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

Mat mat_transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

Mat mat_inverse(const Mat& A) {
  require_square(A, "mat_inverse");
  Eigen::MatrixXd M = to_eigen(A);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) fail(ErrorCode::precondition, "mat_inverse: singular matrix");
  return from_eigen(lu.inverse());
}

Mat mat_pow(const Mat& A, int k) {
  require_square(A, "mat_pow");
  Mat base = k >= 0 ? A : mat_inverse(A);
  int e = std::abs(k);
  Mat out = Mat::identity(A.rows);
  while (e > 0) {
    if (e & 1) out = mat_mul(out, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return out;
}

double mat_det(const Mat& A) {
  require_square(A, "mat_det");
  return to_eigen(A).determinant();
}

double mat_norm_fro(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += v * v;
  return std::sqrt(s);
}

std::vector<double> mat_apply(const Mat& A, const std::vector<double>& x) {
  if (int(x.size()) != A.cols) fail(ErrorCode::domain, "mat_apply: shape mismatch");
  std::vector<double> y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> eigenvalue_moduli(const Mat& A) {
  require_square(A, "eigenvalue_moduli");
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(A), false);
  if (es.info() != Eigen::Success) fail(ErrorCode::numeric, "eigenvalue_moduli: solver failed");
  std::vector<double> mods(A.rows);
  for (int i = 0; i < A.rows; ++i) mods[i] = std::abs(es.eigenvalues()[i]);
  std::sort(mods.begin(), mods.end());
  return mods;
}

HermitianEig hermitian_eig(const CMat& G, bool want_vectors) {
  if (G.rows != G.cols || G.rows == 0) fail(ErrorCode::domain, "hermitian_eig: square matrix required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  es.compute(to_eigen(G), want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::numeric, "hermitian_eig: solver failed");
  HermitianEig out;
  out.values.resize(G.rows);
  for (int i = 0; i < G.rows; ++i) out.values[i] = es.eigenvalues()[i];
  if (want_vectors) {
    out.vectors = CMat(G.rows, G.cols);
    for (int i = 0; i < G.rows; ++i)
      for (int j = 0; j < G.cols; ++j) out.vectors(i, j) = es.eigenvectors()(i, j);
  }
  return out;
}

PinvResult hermitian_pinv(const CMat& G, double rel_cutoff) {
  int n = G.rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(G));
  if (es.info() != Eigen::Success) fail(ErrorCode::numeric, "hermitian_pinv: solver failed");
  PinvResult res;
  res.eig_max = es.eigenvalues()(n - 1);
  double cutoff = res.eig_max * rel_cutoff;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  res.eig_min_retained = 0.0;
  for (int k = 0; k < n; ++k) {
    double lam = es.eigenvalues()(k);
    if (lam <= cutoff || lam <= 0.0) continue;
    if (res.rank == 0) res.eig_min_retained = lam;
    res.rank += 1;
    inv(k) = 1.0 / lam;
  }
  if (res.rank == 0) fail(ErrorCode::conditioning, "hermitian_pinv: no eigenvalue above cutoff");
  Eigen::MatrixXcd P =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  res.pinv = CMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) res.pinv(i, j) = P(i, j);
  return res;
}

std::vector<cplx> cmat_apply(const CMat& A, const std::vector<cplx>& x) {
  if (int(x.size()) != A.cols) fail(ErrorCode::domain, "cmat_apply: shape mismatch");
  std::vector<cplx> y(A.rows, cplx(0.0, 0.0));
  for (int i = 0; i < A.rows; ++i) {
    cplx s(0.0, 0.0);
    const cplx* row = &A.a[size_t(i) * A.cols];
    for (int j = 0; j < A.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double cg_solve(const CMat& G, const std::vector<cplx>& b, std::vector<cplx>& x,
                double rel_tol, int max_iter) {
  int n = G.rows;
  if (int(b.size()) != n) fail(ErrorCode::domain, "cg_solve: shape mismatch");
  x.assign(n, cplx(0.0, 0.0));
  std::vector<cplx> r = b, p = b, Gp(n);
  std::vector<cplx> best = x;
  auto dot = [&](const std::vector<cplx>& u, const std::vector<cplx>& v) {
    cplx s(0.0, 0.0);
    for (int i = 0; i < n; ++i) s += std::conj(u[i]) * v[i];
    return s;
  };
  double bnorm = std::sqrt(std::real(dot(b, b)));
  if (bnorm == 0.0) return 0.0;
  double rr = std::real(dot(r, r));
  double best_rr = rr;
  int stagnant = 0;
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= rel_tol * bnorm) break;
    Gp = cmat_apply(G, p);
    double pGp = std::real(dot(p, Gp));
    if (pGp <= 0.0) break;  // left the numerically positive subspace
    double alpha = rr / pGp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Gp[i];
    }
    double rr_new = std::real(dot(r, r));
    if (rr_new < best_rr * (1.0 - 1e-12)) {
      best_rr = rr_new;
      best = x;
      stagnant = 0;
    } else if (++stagnant >= 50) {
      // the residual now lives in the numerically null directions; keep the
      // best iterate rather than polishing noise
      break;
    }
    double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  if (best_rr < rr) {
    x = best;
    rr = best_rr;
  }
  return std::sqrt(rr) / bnorm;
}

}  // namespace wf
