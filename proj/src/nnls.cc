#include "gpt_spectra/nnls.h"

#include <limits>
#include <vector>

namespace gpt_spectra {
namespace {

Vector SolveOnPassiveSet(const Matrix& a, const Vector& b, const std::vector<bool>& passive) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(passive.size()); ++j) {
    if (passive[j]) idx.push_back(j);
  }
  Vector z = Vector::Zero(a.cols());
  if (idx.empty()) return z;
  Matrix sub(a.rows(), static_cast<int>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<int>(k)) = a.col(idx[k]);
  const Vector s = sub.colPivHouseholderQr().solve(b);
  for (size_t k = 0; k < idx.size(); ++k) z(idx[k]) = s(static_cast<int>(k));
  return z;
}

}  // namespace

NnlsResult SolveNnls(const Matrix& a, const Vector& b, int max_iterations) {
  const int n = static_cast<int>(a.cols());
  if (max_iterations <= 0) max_iterations = 3 * n + 30;
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(1.0, a.cwiseAbs().maxCoeff()) * std::max(a.rows(), a.cols());

  NnlsResult out;
  out.x = Vector::Zero(n);
  std::vector<bool> passive(n, false);
  int outer = 0;
  while (outer++ < max_iterations) {
    const Vector w = a.transpose() * (b - a * out.x);
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    passive[best] = true;
    while (true) {
      const Vector z = SolveOnPassiveSet(a, b, passive);
      bool feasible = true;
      for (int j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= tol) feasible = false;
      }
      if (feasible) {
        out.x = z;
        break;
      }
      double alpha = 1.0;
      for (int j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= tol) {
          const double denom = out.x(j) - z(j);
          if (denom > 0) alpha = std::min(alpha, out.x(j) / denom);
        }
      }
      out.x += alpha * (z - out.x);
      for (int j = 0; j < n; ++j) {
        if (passive[j] && std::abs(out.x(j)) <= tol) {
          passive[j] = false;
          out.x(j) = 0.0;
        }
      }
    }
  }
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

}  // namespace gpt_spectra
