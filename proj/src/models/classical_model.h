#pragma once

#include "gpt_spectra/system_model.h"

namespace gpt_spectra::internal {

/// The simplex with n vertices: the nonnegative orthant in Rⁿ with u = Σ xᵢ.
class ClassicalModel final : public SystemModel {
 public:
  explicit ClassicalModel(int n);

  ModelKind kind() const override { return ModelKind::kClassical; }
  nlohmann::json params() const override;
  int max_distinguishable() const override { return dim(); }

  double ConeMargin(const Vector& x) const override;
  EffectRange RangeOverStates(const Vector& e) const override;
  Vector CenterState() const override;
  std::optional<PolyhedralCone> ExactCone() const override;

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
  std::vector<Vector> ValidityStates() const override;
  bool ValidityStatesExact() const override { return true; }

  Matrix SampleReversible(Rng& rng) const override;
  std::optional<Matrix> ReversibleMapBetween(const Vector& from, const Vector& to) const override;

  Face FaceOf(const Vector& x) const override;
  FilterMaps FiltersFor(const Face& face, const Matrix* inner_product) const override;
  std::vector<Face> EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const override;

  std::vector<ExpansionTerm> SpectralTerms(const Vector& a, double merge_tol) const override;
  std::vector<Vector> AtomicRefinement(const Vector& unit) const override;

 private:
  Vector Basis(int i) const;
  int PureIndex(const Vector& x, double tol) const;
};

}  // namespace gpt_spectra::internal
