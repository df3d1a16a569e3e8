#pragma once

#include "gpt_spectra/system_model.h"

namespace gpt_spectra::internal {

/// Ω = {(1, v) : ‖v‖ ≤ 1} in R^{k+1}; the cone is the Lorentz cone.
class BallModel final : public SystemModel {
 public:
  explicit BallModel(int k);

  ModelKind kind() const override { return ModelKind::kBall; }
  nlohmann::json params() const override { return {{"k", dim() - 1}}; }
  int max_distinguishable() const override { return 2; }

  double ConeMargin(const Vector& x) const override;
  EffectRange RangeOverStates(const Vector& e) const override;
  Vector CenterState() const override;

  Vector SamplePure(Rng& rng) const override;
  Vector SampleState(Rng& rng) const override;
  std::vector<Vector> PureNet(int size) const override;
  bool IsPure(const Vector& x, double tol) const override;

  Vector Tilde(const Vector& pure) const override;
  Vector Hat(const Vector& atom) const override;
  std::optional<AtomicSplit> SplitAtomic(const Vector& e) const override;
  Vector SampleAtom(Rng& rng) const override { return Tilde(SamplePure(rng)); }

  std::vector<WeightedState> Decompose(const Vector& state) const override;
  std::vector<std::vector<WeightedState>> EnumerateDecompositions(
      const Vector& state) const override;
  std::vector<Vector> ValidityStates() const override { return PureNet(64 * dim()); }
  bool ValidityStatesExact() const override { return false; }
  std::optional<std::vector<Vector>> DistinguishingCandidate(
      const std::vector<Vector>& states) const override;

  Matrix SampleReversible(Rng& rng) const override;
  std::optional<Matrix> ReversibleMapBetween(const Vector& from, const Vector& to) const override;

  Face FaceOf(const Vector& x) const override;
  FilterMaps FiltersFor(const Face& face, const Matrix* inner_product) const override;
  std::vector<Face> EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const override;

  std::vector<ExpansionTerm> SpectralTerms(const Vector& a, double merge_tol) const override;
  std::vector<Vector> AtomicRefinement(const Vector& unit) const override;
  Vector UnitState(const Vector& projective_unit) const override;

 private:
  Vector PureAt(const Vector& direction) const;
};

}  // namespace gpt_spectra::internal
