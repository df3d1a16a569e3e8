#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpt_spectra/errors.h"
#include "gpt_spectra/random.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

enum class ModelKind {
  kClassical,
  kQuantum,
  kBall,
  kSquareBit,
  kBipyramid,
  kEllipse,
  kPolyhedral,
  kPuffedTriangle,
};

std::string ModelKindName(ModelKind kind);

/// A pair of complementary positive projections on A.
struct FilterMaps {
  Matrix map;         // P
  Matrix complement;  // P'
};

/// A polyhedral cone given by both its extreme rays and the extreme rays of
/// its dual (facet normals), used wherever an exact answer is available.
struct PolyhedralCone {
  std::vector<Vector> rays;
  std::vector<Vector> facet_normals;
};

/// One term of a spectral expansion of an element of A*.
struct ExpansionTerm {
  double coefficient = 0.0;
  Vector unit;  // projective unit
};

/// A finite-dimensional ordered vector space (A, A₊, u) together with the
/// model-specific primitives the rest of the library is built on: a cone
/// oracle, exact or certified effect ranges, pure-state samplers, the
/// atom/pure-state correspondence, decomposers, filters and reversible maps.
///
/// Effects pair with states through the coordinate dot product, so A* is
/// identified with the dual cone of A₊ in the same coordinates.
class SystemModel {
 public:
  SystemModel(int dim, Vector unit) : dim_(dim), unit_(std::move(unit)) {}
  virtual ~SystemModel() = default;

  SystemModel(const SystemModel&) = delete;
  SystemModel& operator=(const SystemModel&) = delete;

  int dim() const { return dim_; }
  const Vector& unit() const { return unit_; }

  virtual ModelKind kind() const = 0;
  virtual nlohmann::json params() const = 0;
  /// Maximal number of perfectly distinguishable pure states.
  virtual int max_distinguishable() const = 0;

  // --- cone and effects -----------------------------------------------------

  /// Scale-invariant signed membership margin: >= 0 iff x ∈ A₊ (up to
  /// rounding); negative values measure the violation relative to ‖x‖.
  virtual double ConeMargin(const Vector& x) const = 0;
  bool InCone(const Vector& x, double tol = 1e-10) const { return ConeMargin(x) >= -tol; }

  /// Minimum and maximum of the functional e over Ω.
  virtual EffectRange RangeOverStates(const Vector& e) const = 0;

  /// A distinguished state in the relative interior of Ω.
  virtual Vector CenterState() const = 0;

  /// Exact cone data, for models whose cone is polyhedral.
  virtual std::optional<PolyhedralCone> ExactCone() const { return std::nullopt; }

  // --- pure states and atoms --------------------------------------------------

  virtual Vector SamplePure(Rng& rng) const = 0;
  virtual Vector SampleState(Rng& rng) const = 0;
  /// Deterministic quasi-uniform net of pure states (all vertices for
  /// polyhedral models, in which case `size` is ignored).
  virtual std::vector<Vector> PureNet(int size) const = 0;
  virtual bool IsPure(const Vector& x, double tol = 1e-9) const = 0;

  /// The unique atomic effect taking the value 1 on the pure state.
  virtual Vector Tilde(const Vector& pure) const = 0;
  /// The unique normalized state on which the atomic effect takes the value 1.
  virtual Vector Hat(const Vector& atom) const = 0;
  /// Writes e = c·π with π atomic; nullopt when e is not on an extreme ray of
  /// the dual cone.
  virtual std::optional<AtomicSplit> SplitAtomic(const Vector& e) const = 0;
  virtual Vector SampleAtom(Rng& rng) const = 0;

  // --- decompositions ---------------------------------------------------------

  /// A convex decomposition into perfectly distinguishable pure states.
  virtual std::vector<WeightedState> Decompose(const Vector& state) const = 0;
  /// Every spectral decomposition the model can enumerate for the state.
  virtual std::vector<std::vector<WeightedState>> EnumerateDecompositions(
      const Vector& state) const = 0;

  /// States on which effect validity (e ≥ 0) is imposed in distinguishability
  /// LPs. Exact (the extreme points) for polyhedral models.
  virtual std::vector<Vector> ValidityStates() const = 0;
  virtual bool ValidityStatesExact() const = 0;
  /// For non-polyhedral models: a closed-form candidate distinguishing
  /// measurement, to be verified a posteriori.
  virtual std::optional<std::vector<Vector>> DistinguishingCandidate(
      const std::vector<Vector>& states) const {
    (void)states;
    return std::nullopt;
  }

  // --- reversible maps --------------------------------------------------------

  virtual Matrix SampleReversible(Rng& rng) const = 0;
  /// A reversible map T with T(from) = to, if the model's group has one.
  virtual std::optional<Matrix> ReversibleMapBetween(const Vector& from,
                                                     const Vector& to) const = 0;

  // --- faces and filters --------------------------------------------------------

  /// Smallest face of A₊ containing x.
  virtual Face FaceOf(const Vector& x) const = 0;
  /// A point of the relative interior of span(basis) ∩ A₊. The default projects
  /// CenterState() onto the subspace, which is correct for the self-dual
  /// catalog models.
  virtual Vector RelativeInteriorPoint(const Matrix& basis) const;
  /// Filter and complement for the face. `inner_product` is a form on A used
  /// by models that construct filters as orthogonal projections.
  virtual FilterMaps FiltersFor(const Face& face, const Matrix* inner_product) const = 0;
  /// Faces for lattice checks; `exhaustive` reports whether the list is the
  /// whole lattice.
  virtual std::vector<Face> EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const = 0;

  // --- observables ------------------------------------------------------------

  /// Spectral expansion of a ∈ A* into mutually orthogonal projective units,
  /// one term per distinct coefficient (zero coefficient included).
  virtual std::vector<ExpansionTerm> SpectralTerms(const Vector& a, double merge_tol) const;
  /// Splits a projective unit into mutually orthogonal atoms summing to it.
  virtual std::vector<Vector> AtomicRefinement(const Vector& unit) const;

  // --- helpers built on the primitives ------------------------------------------

  Face FaceFromSubspace(const Matrix& basis) const { return FaceOf(RelativeInteriorPoint(basis)); }
  /// A cone element whose face is {x : p(x) = u(x)} for the projective unit
  /// p. The default returns p itself, valid where atoms and pure states are
  /// proportional in coordinates.
  virtual Vector UnitState(const Vector& projective_unit) const { return projective_unit; }
  void CheckDim(const Vector& x, const char* what) const;

 private:
  int dim_;
  Vector unit_;
};

using ModelPtr = std::shared_ptr<const SystemModel>;

}  // namespace gpt_spectra
