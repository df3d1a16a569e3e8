#pragma once

#include "gpt_spectra/system_model.h"

namespace gpt_spectra::internal {

/// A strictly convex planar body K given by its support function h(θ), with
/// Ω = {(1, p) : p ∈ K} in R³. Boundary points are parametrized by their
/// outward normal angle: x(θ) = h(θ) n(θ) + h'(θ) n'(θ).
///
/// Atoms are the functionals π_θ = (h(θ+π), cos θ, sin θ) / (h(θ) + h(θ+π)),
/// which equal 1 at x(θ) and vanish at x(θ+π); two pure states are perfectly
/// distinguishable exactly when their normals are opposite.
class PlanarBodyModel : public SystemModel {
 public:
  explicit PlanarBodyModel(int chord_grid);

  virtual double Support(double theta) const = 0;
  virtual double SupportD1(double theta) const = 0;
  virtual double SupportD2(double theta) const = 0;

  Eigen::Vector2d Boundary(double theta) const;
  /// Outward normal angle at a boundary point p (nearest boundary point for
  /// points off the boundary).
  virtual double NormalAngle(const Eigen::Vector2d& p) const;
  Vector PureAtAngle(double theta) const;
  Vector AtomAtAngle(double theta) const;
  int chord_grid() const { return chord_grid_; }

  /// Normal angles θ ∈ [0, π) of every antipodal chord [x(θ), x(θ+π)]
  /// through p, at most `max_chords` of them (evenly subsampled).
  std::vector<double> ChordsThrough(const Eigen::Vector2d& p, int max_chords = 64) const;

  int max_distinguishable() const override { return 2; }

  double ConeMargin(const Vector& x) const override;
  EffectRange RangeOverStates(const Vector& e) const override;
  Vector CenterState() const override { return unit(); }

  Vector SamplePure(Rng& rng) const override;
  Vector SampleState(Rng& rng) const override;
  std::vector<Vector> PureNet(int size) const override;
  bool IsPure(const Vector& x, double tol) const override;

  Vector Tilde(const Vector& pure) const override;
  Vector Hat(const Vector& atom) const override;
  std::optional<AtomicSplit> SplitAtomic(const Vector& e) const override;
  Vector SampleAtom(Rng& rng) const override;

  std::vector<WeightedState> Decompose(const Vector& state) const override;
  std::vector<std::vector<WeightedState>> EnumerateDecompositions(
      const Vector& state) const override;
  std::vector<Vector> ValidityStates() const override { return PureNet(512); }
  bool ValidityStatesExact() const override { return false; }
  std::optional<std::vector<Vector>> DistinguishingCandidate(
      const std::vector<Vector>& states) const override;

  Face FaceOf(const Vector& x) const override;
  FilterMaps FiltersFor(const Face& face, const Matrix* inner_product) const override;
  std::vector<Face> EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const override;

  std::vector<ExpansionTerm> SpectralTerms(const Vector& a, double merge_tol) const override;
  std::vector<Vector> AtomicRefinement(const Vector& unit) const override;
  Vector UnitState(const Vector& projective_unit) const override;

 protected:
  /// Minimum over θ of t·h(θ) − n(θ)·p.
  double MinSupportGap(double t, const Eigen::Vector2d& p) const;
  std::vector<WeightedState> ChordDecomposition(const Eigen::Vector2d& p, double theta) const;

 private:
  int chord_grid_;
};

/// Filled ellipse x²/a² + y²/b² ≤ 1.
class EllipseModel final : public PlanarBodyModel {
 public:
  EllipseModel(double a, double b, int chord_grid = 10000);

  ModelKind kind() const override { return ModelKind::kEllipse; }
  nlohmann::json params() const override;

  double Support(double theta) const override;
  double SupportD1(double theta) const override;
  double SupportD2(double theta) const override;
  double NormalAngle(const Eigen::Vector2d& p) const override;

  Matrix SampleReversible(Rng& rng) const override;
  std::optional<Matrix> ReversibleMapBetween(const Vector& from, const Vector& to) const override;

 private:
  double a_, b_;
};

/// Body with support function h(θ) = 1 + ε₃ cos 3θ + ε₂ cos 2θ: a triangle-like
/// oval (ε₃) with the threefold symmetry broken to a single mirror (ε₂).
class PuffedTriangleModel final : public PlanarBodyModel {
 public:
  PuffedTriangleModel(double eps3, double eps2, int chord_grid = 10000);

  ModelKind kind() const override { return ModelKind::kPuffedTriangle; }
  nlohmann::json params() const override;

  double Support(double theta) const override;
  double SupportD1(double theta) const override;
  double SupportD2(double theta) const override;

  Matrix SampleReversible(Rng& rng) const override;
  std::optional<Matrix> ReversibleMapBetween(const Vector& from, const Vector& to) const override;

  /// The linear symmetries of Ω (as 3×3 maps fixing u).
  const std::vector<Matrix>& symmetries() const { return symmetries_; }

 private:
  double eps3_, eps2_;
  std::vector<Matrix> symmetries_;
};

}  // namespace gpt_spectra::internal
