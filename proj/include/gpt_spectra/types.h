#pragma once

#include <vector>

#include <Eigen/Dense>

namespace gpt_spectra {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numeric tolerances shared across modules. Defaults follow the library-wide
/// convention: 1e-12 for linear identities, 1e-9 for LP-derived objects.
struct Tolerances {
  double linear = 1e-12;
  double lp = 1e-9;
  double cone = 1e-10;
  double projection = 1e-10;
  double majorization = 1e-10;
};

inline const Tolerances& DefaultTolerances() {
  static const Tolerances kDefaults;
  return kDefaults;
}

/// Element of A. `normalized` records whether u(coords) == 1 is expected.
struct StateVec {
  Vector coords;
  bool normalized = true;
};

/// Element of A*, acting on A through the coordinate dot product.
struct EffectVec {
  Vector coords;
};

struct Measurement {
  std::vector<EffectVec> effects;
};

/// Linear map acting on A; its transpose acts on A*.
struct LinearMapA {
  Matrix matrix;
  bool asserted_positive = false;
  bool reversible = false;
};

/// One term of a convex decomposition.
struct WeightedState {
  double probability = 0.0;
  Vector state;
};

/// c * atom == effect, with 0 < c <= 1.
struct AtomicSplit {
  double scale = 0.0;
  Vector atom;
};

/// Extremes of an effect over the normalized states, with maximizing and
/// minimizing states.
struct EffectRange {
  double min = 0.0;
  double max = 0.0;
  Vector argmin;
  Vector argmax;
};

/// A face of the cone, stored through an orthonormal basis of its linear span
/// (columns). The empty face has zero columns.
struct Face {
  Matrix basis;

  int rank() const { return static_cast<int>(basis.cols()); }
  bool empty() const { return basis.cols() == 0; }
};

}  // namespace gpt_spectra
