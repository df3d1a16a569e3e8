#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpt_spectra/random.h"
#include "gpt_spectra/spectral.h"
#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// x ≺ y: descending partial sums of x never exceed those of y and the totals
/// agree. Shorter vectors are padded with zeros.
bool Majorizes(const Vector& y, const Vector& x, double tol = 1e-10);
/// x ≺_w y: as Majorizes, with Σx ≤ Σy in place of equality.
bool WeakMajorizes(const Vector& y, const Vector& x, double tol = 1e-10);
/// min over k of Σ_{i≤k} y↓_i − Σ_{i≤k} x↓_i (negative when some partial sum
/// of x exceeds that of y).
double PartialSumMargin(const Vector& y, const Vector& x);

/// Nonnegative with all row and column sums ≤ 1 (+tol). Throws
/// kNegativeEntry when an entry is below −tol.
bool IsDoublySubstochastic(const Matrix& m, double tol = 1e-10);
/// A y ≥ 0 with My not weakly majorized by y, searched among the basis
/// vectors and the all-ones vector; nullopt when none of them is a witness.
std::optional<Vector> WeakMajorizationWitness(const Matrix& m, double tol = 1e-10);

/// e_i = c_i π_i for every effect, with π_i atomic. Throws kNotFineGrained on
/// the first effect that is not a positive multiple of an atom.
std::vector<AtomicSplit> FineGrainedSplit(const Measurement& m, const SystemModel& sys);

struct TransitionMatrix {
  Matrix m;  // m(i, j) = c_i π_i(ω_j); rows are outcomes, columns spectral parts
  Vector row_scalars;
  std::vector<Vector> atoms;
  std::vector<Vector> spectral_states;
  /// max_j |Σ_i m(i, j) − 1|.
  double stochastic_error = 0.0;
  /// max_i (Σ_j m(i, j) − c_i); at most 0 (up to rounding) under STP.
  double max_row_excess = 0.0;
};

TransitionMatrix BuildTransitionMatrix(const Measurement& fine_grained, const Decomposition& dec,
                                       const SystemModel& sys);

/// Random fine-grained measurement: random atoms weighted by a nonnegative
/// least-squares solution of Σ c_i π_i = u (rejected unless exact), with some
/// effects randomly split into two proportional pieces.
Measurement SampleFineGrainedMeasurement(const SystemModel& sys, Rng& rng);

/// {ω̃_j} for the decomposition's pure parts, completed to a measurement by an
/// atomic refinement of u − Σ ω̃_j.
Measurement SpectralMeasurement(const Decomposition& dec, const SystemModel& sys);

/// Outcome probabilities e_i(ω).
Vector OutcomeDistribution(const Measurement& m, const Vector& state);

struct MajorizationReport {
  int trials = 0;
  int violations = 0;
  Vector spectrum;
  /// Smallest partial-sum margin of the spectrum over an outcome vector.
  double worst_margin = 0.0;
  /// Largest |Σp − Σq|.
  double max_total_deviation = 0.0;
  /// Largest ‖q − M p‖∞ through the transition matrix.
  double max_transition_residual = 0.0;
  double max_stochastic_error = 0.0;
  double max_row_excess = 0.0;
};

/// Samples fine-grained measurements and checks that each outcome vector is
/// majorized by the spectrum.
MajorizationReport VerifyTheoremMajorization(const SystemModel& sys, const StateVec& state,
                                             int n_measurements, std::uint64_t seed);

struct MeasurementEntropyResult {
  double value = 0.0;
  double spectral_entropy = 0.0;
  /// Entropy of the spectral measurement's outcomes, when it exists.
  std::optional<double> spectral_measurement_entropy;
  /// Lowest entropy among the sampled measurements.
  double best_sampled = 0.0;
  int searched = 0;
};

/// Upper estimate of the infimum of outcome entropy over fine-grained
/// measurements: the spectral measurement and `budget` sampled ones.
MeasurementEntropyResult MeasurementEntropy(const StateVec& state, const SystemModel& sys,
                                            int budget, std::uint64_t seed,
                                            LogBase base = LogBase::kE);

struct GroupAverageReport {
  Vector mixture;
  Vector input_spectrum;
  Vector mixture_spectrum;
  bool majorized = false;
  double margin = 0.0;
};

/// ω' = Σ_k w_k T_k ω and the check spectrum(ω') ≺ spectrum(ω). Empty
/// `weights` means uniform.
GroupAverageReport GroupAverageMajorization(const SystemModel& sys, const StateVec& state,
                                            const std::vector<Matrix>& maps,
                                            std::vector<double> weights);
/// As above with `n_group_samples` sampled reversible maps.
GroupAverageReport GroupAverageMajorization(const SystemModel& sys, const StateVec& state,
                                            int n_group_samples, std::vector<double> weights,
                                            std::uint64_t seed);

}  // namespace gpt_spectra
