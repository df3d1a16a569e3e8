#pragma once

#include <mutex>

#include "gpt_spectra/polytope.h"
#include "gpt_spectra/system_model.h"

namespace gpt_spectra::internal {

/// A polytopal state space Ω = conv(vertices), vertices homogenized with a
/// leading 1 so that u = (1, 0, …, 0). All cone questions are answered exactly
/// from the vertex/facet description.
class PolytopeModel final : public SystemModel {
 public:
  PolytopeModel(ModelKind kind, std::vector<Vector> vertices, nlohmann::json params);

  const Polytope& polytope() const { return poly_; }
  /// Vertex subsets that are perfectly distinguishable, largest first and
  /// lexicographic within a size. Computed on first use.
  const std::vector<std::vector<int>>& DistinguishableSets() const;
  /// Linear symmetries of Ω, identity first. `complete` reports whether the
  /// enumeration finished within budget.
  const std::vector<Matrix>& symmetries() const { return symmetries_; }
  bool symmetries_complete() const { return symmetries_complete_; }
  /// Form used to build filters when none is supplied: the one making the
  /// vertices orthonormal for a simplex, the dot product otherwise.
  Matrix DefaultInnerProduct() const;

  ModelKind kind() const override { return kind_; }
  nlohmann::json params() const override { return params_; }
  int max_distinguishable() const override;

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
  std::vector<Vector> ValidityStates() const override { return poly_.vertices(); }
  bool ValidityStatesExact() const override { return true; }

  Matrix SampleReversible(Rng& rng) const override;
  std::optional<Matrix> ReversibleMapBetween(const Vector& from, const Vector& to) const override;

  Face FaceOf(const Vector& x) const override;
  Vector RelativeInteriorPoint(const Matrix& basis) const override;
  FilterMaps FiltersFor(const Face& face, const Matrix* inner_product) const override;
  std::vector<Face> EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const override;

  VertexMask MaskOf(const Face& face) const;
  Face FaceOfMask(VertexMask mask) const;

 private:
  std::optional<std::vector<WeightedState>> WeightsOn(const std::vector<int>& set,
                                                      const Vector& state) const;
  void ComputeSymmetries();
  /// Index of the facet whose normalized functional is proportional to e.
  int FacetIndexOf(const Vector& e) const;

  ModelKind kind_;
  Polytope poly_;
  nlohmann::json params_;
  std::vector<Vector> atoms_;           // normalized facet functionals
  std::vector<VertexMask> atom_argmax_;  // vertices where each atom equals 1
  std::vector<Matrix> symmetries_;
  bool symmetries_complete_ = true;

  mutable std::once_flag sets_once_;
  mutable std::vector<std::vector<int>> distinguishable_sets_;
};

}  // namespace gpt_spectra::internal
