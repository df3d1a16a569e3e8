#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// A convex decomposition into pure states, in the model decomposer's order.
struct Decomposition {
  std::vector<WeightedState> parts;
  /// True when the pure parts were shown perfectly distinguishable.
  bool certified_distinguishable = false;
};

/// Decreasingly ordered probabilities, zero-padded to n_max.
struct Spectrum {
  Vector probs;
  int n_max = 0;
};

enum class LogBase { kE, kTwo };

/// The model's decomposition of a normalized state, zero-probability parts
/// dropped and (optionally) certified with PerfectlyDistinguishable.
Decomposition Decompose(const StateVec& state, const SystemModel& sys, bool certify = true);

/// Sorted, padded probabilities of a decomposition.
Spectrum SpectrumOf(const Decomposition& dec, int n_max);
Spectrum ComputeSpectrum(const StateVec& state, const SystemModel& sys);

/// −Σ p log p over the positive entries (0 log 0 = 0).
double EntropyOf(const Vector& probs, LogBase base = LogBase::kE);
double SpectralEntropy(const StateVec& state, const SystemModel& sys, LogBase base = LogBase::kE);

using SymmetricFunction = std::function<double(const Vector&)>;

struct SchurValue {
  double value = 0.0;
  /// Set when the state has spectral decompositions with different
  /// probability vectors, so the value depends on the decomposer's choice.
  bool ambiguous = false;
};

/// f applied to the padded spectrum. f is spot-checked for permutation
/// symmetry on the spectrum and on random probability vectors; a failure
/// throws kAsymmetricFunction.
SchurValue SchurFunctional(const StateVec& state, const SystemModel& sys,
                           const SymmetricFunction& f, std::uint64_t seed = 0);

struct AxiomSWitness {
  Vector state;
  Vector first;   // sorted, padded
  Vector second;  // sorted, padded
};

struct AxiomSReport {
  bool holds = true;
  int states_checked = 0;
  /// Sampled states for which the model had no decomposition at all.
  int undecomposable = 0;
  /// Largest sup-norm gap between two spectra of one state.
  double max_gap = 0.0;
  std::optional<AxiomSWitness> witness;
};

/// Enumerates the spectral decompositions of the center state and of
/// `n_samples` random states and compares their probability vectors.
AxiomSReport CheckAxiomS(const SystemModel& sys, int n_samples, std::uint64_t seed,
                         double tol = 1e-9);

struct AxiomWSReport {
  bool holds = true;
  int states_checked = 0;
  int failures = 0;
  std::optional<Vector> witness;
};

/// Checks that sampled states have a certified decomposition into perfectly
/// distinguishable pure states.
AxiomWSReport CheckAxiomWS(const SystemModel& sys, int n_samples, std::uint64_t seed);

}  // namespace gpt_spectra
