#include "gpt_spectra/linalg.h"

#include <algorithm>

#include "gpt_spectra/errors.h"

namespace gpt_spectra {

Matrix OrthonormalBasis(const Matrix& m, double tol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix NullSpace(const Matrix& m, double tol) {
  const int n = static_cast<int>(m.cols());
  if (m.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  int rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

int NumericalRank(const Matrix& m, double tol) {
  return static_cast<int>(OrthonormalBasis(m, tol).cols());
}

Matrix IntersectSubspaces(const Matrix& a, const Matrix& b, double tol) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() == 0 || b.cols() == 0) return Matrix(n, 0);
  // x in both spans iff (I - P_a) x = 0 and (I - P_b) x = 0.
  Matrix stacked(2 * n, n);
  stacked.topRows(n) = Matrix::Identity(n, n) - a * a.transpose();
  stacked.bottomRows(n) = Matrix::Identity(n, n) - b * b.transpose();
  return NullSpace(stacked, tol);
}

bool SubspaceContains(const Matrix& outer, const Matrix& inner, double tol) {
  if (inner.cols() == 0) return true;
  if (outer.cols() == 0) return inner.norm() <= tol;
  const Matrix residual = inner - outer * (outer.transpose() * inner);
  return residual.cwiseAbs().maxCoeff() <= tol;
}

Matrix StackColumns(const std::vector<Vector>& columns, int rows) {
  Matrix m(rows, static_cast<int>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw Error(ErrorCode::kDimensionMismatch, "column length differs from row count");
    }
    m.col(static_cast<int>(j)) = columns[j];
  }
  return m;
}

Vector SymmetricEigenvalues(const Matrix& m) {
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Matrix FormOrthogonalProjector(const Matrix& basis, const Matrix& gram) {
  const int n = static_cast<int>(gram.rows());
  if (basis.cols() == 0) return Matrix::Zero(n, n);
  const Matrix restricted = basis.transpose() * gram * basis;
  Eigen::FullPivLU<Matrix> lu(restricted);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kSingularInnerProduct, "form is degenerate on the subspace");
  }
  return basis * lu.solve(basis.transpose() * gram);
}

}  // namespace gpt_spectra
