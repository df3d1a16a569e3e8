#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpt_spectra/projective.h"
#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

struct Branch {
  int label = 0;  // 0-based classical label
  double weight = 0.0;
  Vector state;  // normalized conditional state
};

/// A classical register with `labels` values joined to the system, realized
/// as the direct sum of `labels` copies of A (block x holds the unnormalized
/// conditional state for label x).
struct CompositeState {
  int labels = 1;
  std::vector<Branch> branches;
  std::vector<double> volumes;
};

Vector ToCompositeVector(const CompositeState& c, int dim);
/// Branch weights are u-evaluations of the blocks; empty blocks are omitted.
CompositeState FromCompositeVector(const Vector& v, int labels, const SystemModel& sys);

/// Costs the protocol does not compute but assumes.
enum class Assumption { kNone, kCostlessSeparation, kAdiabatic };
std::string AssumptionName(Assumption a);

struct LedgerStep {
  std::string name;
  std::vector<double> work;         // joules, per branch
  std::vector<double> probability;  // per branch
  bool heat = false;
  Assumption assumption = Assumption::kNone;

  double ExpectedWork() const;
};

struct WorkLedger {
  std::vector<LedgerStep> steps;
  double k = kBoltzmann;
  double temperature = 300.0;
  double volume = 1.0;
  std::vector<std::string> notes;

  double ExpectedWork() const;
};

/// T(x ⊗ ω) = Σ_i ((x + i) mod N) ⊗ P_i ω as an (N·dim)×(N·dim) matrix,
/// checked on every label paired with sampled pure states.
struct SeparationMap {
  Matrix matrix;
  int labels = 0;
  double positivity_margin = 0.0;
  double norm_preservation_error = 0.0;
};

/// Throws kFiltersIncomplete unless Σ u∘P_i = u within 1e-9.
SeparationMap BuildSeparationMap(const std::vector<Filter>& filters, const SystemModel& sys,
                                 int samples = 32, std::uint64_t seed = 0);

/// Filters on the faces of the parts of ω's decomposition, followed by one
/// on the complement of their join when the parts do not exhaust u.
std::vector<Filter> SpectralFilters(const Vector& omega, const SystemModel& sys);

struct AlignmentCertificate {
  std::vector<Matrix> maps;  // one reversible map per branch
  double max_residual = 0.0;
};

struct AlignResult {
  CompositeState state;
  AlignmentCertificate certificate;
  LedgerStep step;
};

/// Throws kNoReversibleMap when the model's group has no map from some branch
/// state to `target`.
AlignResult AdiabaticAlign(const CompositeState& c, const Vector& target, const SystemModel& sys);

/// W_i = −kT ln q_i, with container i compressed to q_i·V_i. Throws
/// kZeroWeightBranch on a branch with q_i ≤ 0.
LedgerStep IsothermalCompress(CompositeState& c, double temperature, double k);

/// Separate, align, compress and merge ω, then the negated steps of the same
/// protocol for σ in reverse order.
WorkLedger RunVonNeumann(const Vector& omega, const Vector& sigma, const SystemModel& sys,
                         double temperature = 300.0, double k = kBoltzmann, double volume = 1.0);

}  // namespace gpt_spectra
