#pragma once

#include <optional>
#include <vector>

#include "gpt_spectra/perfection.h"
#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// a = Σ λ_i p_i with mutually orthogonal projective units, coefficients
/// distinct and decreasing. The zero-coefficient term, if any, is kept apart.
struct SpectralExpansion {
  std::vector<ExpansionTerm> terms;
  std::optional<ExpansionTerm> zero_term;
  bool nondegenerate = true;
  double reconstruction_error = 0.0;
  /// Largest violation of p_i + p_j ≤ u (and Σ p_i ≤ u) over Ω.
  double orthogonality_violation = 0.0;
};

/// Coefficients within `merge_tol` (relative) are merged. Throws
/// kModelUnsupported for models without an expansion routine, and
/// kInvalidArgument if the result fails to reconstruct a within 1e-10 or the
/// units fail orthogonality by more than 1e-10.
SpectralExpansion SpectralExpand(const Vector& a, const SystemModel& sys,
                                 double merge_tol = 1e-9);

/// All terms of an expansion, zero term included, in decreasing order.
std::vector<ExpansionTerm> AllTerms(const SpectralExpansion& e);

/// The step function λ ↦ e_λ: e_λ = e_j on [μ_j, μ_{j+1}), 0 below μ_1 and u
/// from μ_n on.
struct SpectralFamily {
  std::vector<double> thresholds;  // μ_1 < … < μ_n
  /// e_1 < … < e_n = u, cumulative from the smallest coefficient.
  std::vector<Vector> units;
  /// Projective unit added at each threshold.
  std::vector<Vector> increments;
  /// Shortest gap between consecutive thresholds (infinite for one).
  double theta = 0.0;

  Vector UnitAt(double lambda) const;
};

SpectralFamily MakeSpectralFamily(const Vector& a, const SystemModel& sys,
                                  double merge_tol = 1e-9);

struct GridResult {
  double mesh = 0.0;
  Vector riemann_sum;
  /// max over Ω of |s_γ − a|.
  double error = 0.0;
  /// The nonzero differences e_{λ_i} − e_{λ_{i−1}}.
  std::vector<Vector> difference_units;
  bool finer_than_theta = false;
  /// Difference units coincide with the expansion's units.
  bool matches_expansion = false;
};

struct RiemannReport {
  double theta = 0.0;
  double norm = 0.0;
  std::vector<GridResult> grids;
  /// Every grid with mesh < θ has identical difference units, equal to the
  /// expansion's, and error ≤ mesh.
  bool stabilized = true;
};

/// Riemann sums s_γ = Σ λ_i (e_{λ_i} − e_{λ_{i−1}}) over each grid. Throws
/// kGridOutOfBounds unless every grid is increasing with λ_0 < −‖a‖ and
/// λ_n > ‖a‖.
RiemannReport RiemannStabilizationDemo(const Vector& a, const SystemModel& sys,
                                       const std::vector<std::vector<double>>& grids);

/// Uniform grid on [lo, hi] with the given mesh, hi included.
std::vector<double> UniformGrid(double lo, double hi, double mesh);

struct StateTerm {
  double coefficient = 0.0;
  Vector state;
};

struct StateExpansion {
  std::vector<StateTerm> terms;
  bool orthogonal = true;
  double reconstruction_error = 0.0;
};

/// x = Σ λ_i ω_i with mutually orthogonal pure states: expands φ⁻¹(x),
/// refines each unit into atoms and maps them back through φ. Orthogonality
/// is checked with the face test face(ω_i) ≤ face(ω_j)′.
StateExpansion FinegrainedStateExpansion(const Vector& x, const SystemModel& sys,
                                         const PhiMap& phi);

}  // namespace gpt_spectra
