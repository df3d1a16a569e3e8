#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// Numeric evidence behind a filter. `exact` is set when positivity and
/// neutrality were checked on every extreme ray.
struct FilterCertificate {
  bool exact = false;
  double idempotence_error = 0.0;   // max of ‖P² − P‖, ‖P′² − P′‖
  double orthogonality_error = 0.0; // max of ‖PP′‖, ‖P′P‖
  double positivity_margin = 0.0;   // worst cone margin of P and P′ images
  double normalization_margin = 0.0;  // min over Ω of u − u∘P and u − u∘P′
  double unit_sum_error = 0.0;      // ‖u∘P + u∘P′ − u‖
  double neutrality_error = 0.0;    // worst ‖Px − x‖ with u(Px) = u(x)
  double face_error = 0.0;          // ‖PB − B‖ for the face basis B, plus rank mismatch
  std::string failure;              // empty when certified
};

/// A certified filter P for a face F, with complement P′ and projective unit
/// u∘P.
struct Filter {
  LinearMapA map;
  LinearMapA complement;
  Face face;
  EffectVec unit_effect;
  FilterCertificate certificate;
};

/// Checks the filter axioms for the pair (P, P′) on the face.
FilterCertificate CertifyFilter(const FilterMaps& maps, const Face& face, const SystemModel& sys,
                                double tol = 1e-9);

/// Builds and certifies the filter for `face`. `inner_product` is forwarded to
/// models that construct filters as orthogonal projections. Throws
/// kNotProjective naming the first failed condition.
Filter BuildFilter(const Face& face, const SystemModel& sys,
                   const Matrix* inner_product = nullptr);

struct NeutralityReport {
  int samples = 0;
  /// Samples with u(Px) < u(x), for which neutrality asserts nothing.
  int vacuous = 0;
  int violations = 0;
  double max_error = 0.0;
};

/// Tests Px = x for sampled x ∈ im₊P (built as P applied to random states)
/// and records the samples with u(Px) < u(x) as vacuous.
NeutralityReport NeutralityCheck(const Filter& filter, const SystemModel& sys, int samples,
                                 std::uint64_t seed);

/// ê for an atomic effect. Throws kNotAtomic unless e is a maximal effect on
/// an extreme ray and the round trip tilde(hat(e)) = e holds within 1e-10.
Vector HatOf(const Vector& atom, const SystemModel& sys);
/// ω̃ for a pure state. Throws kNotPure, or kNotProjective when the model has
/// no unique atomic effect for the state.
Vector TildeOf(const Vector& pure, const SystemModel& sys);

/// ω̃(σ) for pure σ and ω.
double TransitionProbability(const Vector& sigma, const Vector& omega, const SystemModel& sys);

struct StpReport {
  bool holds = true;
  /// True when every pair of extreme points was compared.
  bool exact = false;
  int pairs_checked = 0;
  double max_asymmetry = 0.0;
  std::optional<std::pair<Vector, Vector>> witness;
  /// Set when the tilde map itself is undefined on some pure state.
  std::string diagnostic;
};

/// |ω̃(σ) − σ̃(ω)| over all vertex pairs (polyhedral) or `n_pairs` sampled
/// pure pairs.
StpReport CheckSTP(const SystemModel& sys, int n_pairs, std::uint64_t seed, double tol = 1e-9);

struct ProjectivityReport {
  bool holds = true;
  bool exhaustive = false;
  int faces_checked = 0;
  int failures = 0;
  std::optional<Face> witness;
  std::string diagnostic;
};

/// Builds a certified filter for each enumerated face (at most `cap`).
ProjectivityReport CheckProjectivity(const SystemModel& sys, int cap, std::uint64_t seed,
                                     const Matrix* inner_product = nullptr);

struct LemmaReport {
  bool holds = true;
  int pairs_checked = 0;
  int distinguishable_pairs = 0;
  int disagreements = 0;
  std::optional<std::pair<Vector, Vector>> witness;
};

/// Compares LP distinguishability of (ω, σ) with face(ω) ⊆ face(σ)′ on pairs
/// drawn from complementary faces, perturbed pairs and random pure pairs.
LemmaReport CheckLemmaDistinguishability(const SystemModel& sys, int n_pairs,
                                         std::uint64_t seed,
                                         const Matrix* inner_product = nullptr);

// --- face lattice ------------------------------------------------------------

bool FaceLeq(const Face& f, const Face& g);
bool SameFace(const Face& f, const Face& g);
Face FaceJoin(const Face& f, const Face& g, const SystemModel& sys);
Face FaceMeet(const Face& f, const Face& g, const SystemModel& sys);
/// F′ = im₊P′ for the model's filter pair on F (uncertified).
Face FaceComplement(const Face& f, const SystemModel& sys,
                    const Matrix* inner_product = nullptr);

struct OrthomodularReport {
  bool holds = true;
  bool exhaustive = false;
  int faces_checked = 0;
  int pairs_checked = 0;
  int involution_failures = 0;
  int de_morgan_failures = 0;
  int orthomodular_failures = 0;
  int additivity_failures = 0;
  double max_additivity_error = 0.0;
};

/// F″ = F, (F ∨ G)′ = F′ ∧ G′, F ≤ G ⇒ G = F ∨ (G ∧ F′), and u_{F∨G} =
/// u_F + u_G for orthogonal F, G over the enumerated faces. Comparable and
/// orthogonal pairs are constructed explicitly. Throws kLatticeTooLarge when
/// the model cannot enumerate its faces.
OrthomodularReport CheckOrthomodularIdentities(const SystemModel& sys, int cap,
                                               std::uint64_t seed, int max_pairs = 4000,
                                               const Matrix* inner_product = nullptr);

struct EffectIntervalReport {
  int interval_vertices = 0;
  /// Vertices of [0, u] on extreme rays of the dual cone.
  int extremal_atoms = 0;
  int model_atoms = 0;
  /// Every model atom is such a vertex and vice versa.
  bool match = false;
};

/// Enumerates the vertices of the effect interval [0, u] of a polyhedral cone
/// and compares the ones on extreme dual rays with the normalized facet
/// functionals. Throws kModelUnsupported without exact cone data.
EffectIntervalReport CheckAtomsAgainstEffectInterval(const SystemModel& sys);

}  // namespace gpt_spectra
