#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// The linear map φ: A* → A with φ(w_i) = ŵ_i on an atomic basis, and the
/// bilinear form (x, y) = ⟨x, φ(y)⟩ on A* it induces.
struct PhiMap {
  Matrix matrix;
  std::vector<Vector> basis_atoms;
  /// Matrix of the form on A*; equals `matrix` in the coordinate pairing.
  Matrix gram;
  /// Matrix of the transported form on A, (a, b) = aᵀ G b with G = φ⁻¹
  /// symmetrized. Empty when φ is singular.
  Matrix state_form;
};

/// Throws kNotAtomic if some w_i is not a maximal effect on an extreme ray and
/// kNotABasis unless the w_i form a basis of A*.
PhiMap BuildPhi(const SystemModel& sys, const std::vector<Vector>& atomic_basis);

/// Greedy: sample atoms, keep those that raise the rank, until a basis is
/// found. Throws kNotABasis if the sampler does not reach full rank.
std::vector<Vector> SampleAtomicBasis(const SystemModel& sys, std::uint64_t seed);

struct BasisIndependenceReport {
  bool holds = true;
  int bases = 0;
  /// Largest entrywise deviation between φ from different bases.
  double max_deviation = 0.0;
  /// Largest ‖φ(x) − x̂‖ over fresh atoms.
  double max_fresh_error = 0.0;
  /// Smallest cone margin of φ(x) over fresh atoms (pure states expected).
  double min_image_margin = 0.0;
  std::string diagnostic;
};

BasisIndependenceReport CheckBasisIndependence(const SystemModel& sys, int n_bases,
                                               std::uint64_t seed, double tol = 1e-9);

struct InnerProductReport {
  double symmetry_error = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool symmetric = false;
  bool positive_definite = false;
};

/// Symmetry within 1e-10 and min eigenvalue > 1e-10 · max eigenvalue.
InnerProductReport CheckInnerProduct(const PhiMap& phi);
InnerProductReport CheckInnerProduct(const Matrix& gram);

struct CompressionSymmetryReport {
  bool holds = true;
  int filters = 0;
  int triples = 0;
  /// max |(Pa, b) − (a, Pb)| in the form on A.
  double max_asymmetry = 0.0;
  /// Atoms w with P*w = w checked for P φ(w) = φ(w).
  int face_atoms_checked = 0;
  double max_face_atom_error = 0.0;
};

/// Samples `samples` triples (P, a, b) over the supplied filters (matrices on
/// A) with a, b random states.
CompressionSymmetryReport CheckCompressionSymmetry(const PhiMap& phi, const SystemModel& sys,
                                                   const std::vector<Matrix>& filters,
                                                   int samples, std::uint64_t seed,
                                                   double tol = 1e-9);

/// Filters of up to `cap` enumerated faces, built with the form φ⁻¹.
std::vector<Matrix> FiltersUnderPhi(const PhiMap& phi, const SystemModel& sys, int cap,
                                    std::uint64_t seed);

struct FaceDualityReport {
  int rank = 0;
  bool self_dual = false;
  double margin = 0.0;
};

struct SelfDualityReport {
  /// Dual cones compared ray by ray (polyhedral) rather than sampled.
  bool exact = false;
  double gram_min_eigenvalue = 0.0;
  bool positive_definite = false;
  bool cone_self_dual = false;
  double cone_margin = 0.0;
  std::vector<FaceDualityReport> face_reports;
  bool faces_exhaustive = false;
  bool perfect = false;
  std::string note;
};

/// Self-duality of A₊ and of every enumerated face (at most `cap`) under the
/// form φ⁻¹ on A, each face with the form restricted to its span.
SelfDualityReport CheckPerfection(const SystemModel& sys, const PhiMap& phi, int cap = 200,
                                  std::uint64_t seed = 0, double tol = 1e-9);

struct OrthotracialReport {
  Matrix basis;
  int dimension = 0;
  bool contains_unit = false;
  int faces_used = 0;
  bool exhaustive = false;
};

/// Common fixed space of P_F + P_F′ over enumerated faces, with P_F the
/// projection onto lin F orthogonal in the form φ⁻¹; `contains_unit` tests
/// φ(u).
OrthotracialReport OrthotracialSubspace(const SystemModel& sys, const PhiMap& phi, int cap = 200,
                                        std::uint64_t seed = 0);

struct OrderIsomorphism {
  /// Φ: A* → A carrying each extreme dual ray onto an extreme ray of A₊.
  Matrix matrix;
  bool symmetric = false;
  double min_eigenvalue = 0.0;  // of the symmetric part
};

/// Linear bijections A*₊ → A₊ of a polyhedral model found by matching
/// extreme rays and solving for the map, one per ray matching (with unit
/// ray scales when the scales are not forced). Throws
/// kModelUnsupported without exact cone data and kEnumerationBudgetExceeded
/// beyond 8 rays.
std::vector<OrderIsomorphism> ForcedOrderIsomorphisms(const SystemModel& sys);

}  // namespace gpt_spectra
