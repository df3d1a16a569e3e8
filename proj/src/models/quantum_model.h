#pragma once

#include "gpt_spectra/quantum_coords.h"
#include "gpt_spectra/system_model.h"

namespace gpt_spectra::internal {

/// Density matrices on Cᵈ in trace-orthonormal coordinates (see
/// quantum_coords.h); the cone is the positive semidefinite cone.
class QuantumModel final : public SystemModel {
 public:
  explicit QuantumModel(int d);

  int hilbert_dim() const { return d_; }

  ModelKind kind() const override { return ModelKind::kQuantum; }
  nlohmann::json params() const override { return {{"d", d_}}; }
  int max_distinguishable() const override { return d_; }

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
  Vector SampleAtom(Rng& rng) const override { return SamplePure(rng); }

  std::vector<WeightedState> Decompose(const Vector& state) const override;
  std::vector<std::vector<WeightedState>> EnumerateDecompositions(
      const Vector& state) const override;
  std::vector<Vector> ValidityStates() const override;
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

  /// Projector onto the support of a positive semidefinite element.
  ComplexMatrix SupportProjector(const Vector& x, double rel_tol = 1e-11) const;
  /// Face of the cone consisting of operators supported in range(q).
  Face FaceOfProjector(const ComplexMatrix& q) const;

 private:
  ComplexVector RandomVector(Rng& rng) const;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> Eig(const Vector& x) const;

  int d_;
};

/// Haar-random unitary (QR of a complex Ginibre matrix with phases fixed).
ComplexMatrix SampleUnitary(int d, Rng& rng);

}  // namespace gpt_spectra::internal
