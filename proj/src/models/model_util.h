#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gpt_spectra/random.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra::internal {

/// Uniform point of the probability simplex with n entries.
inline Vector SampleDirichlet(int n, Rng& rng) {
  Vector w(n);
  for (int i = 0; i < n; ++i) w(i) = -std::log(1.0 - rng.Uniform());
  return w / w.sum();
}

inline Vector UnitGaussian(int n, Rng& rng) {
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = rng.Normal();
  } while (v.norm() < 1e-8);
  return v.normalized();
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the sign
/// of R's diagonal fixed).
inline Matrix SampleOrthogonal(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.Normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

/// Orthogonal map sending unit vector `from` to unit vector `to`: identity when
/// they agree, otherwise the reflection through the bisecting hyperplane.
inline Matrix ReflectionBetween(const Vector& from, const Vector& to) {
  const int n = static_cast<int>(from.size());
  const Vector w = from - to;
  if (w.norm() < 1e-14) return Matrix::Identity(n, n);
  return Matrix::Identity(n, n) - 2.0 * w * w.transpose() / w.squaredNorm();
}

/// Scale-free relative margin: value / max(norm, tiny), zero for the origin.
inline double RelativeMargin(double value, double norm) {
  if (norm < 1e-300) return 0.0;
  return value / norm;
}

}  // namespace gpt_spectra::internal
