#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpt_spectra/system_model.h"
#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// The dual pairing e(ω). Values within 1e-12 of [0, 1] are clamped into the
/// interval; larger excursions throw kOutOfRange.
double Evaluate(const EffectVec& e, const StateVec& state);

struct MeasurementCheck {
  bool valid = false;
  /// Empty when valid; otherwise names the first failing condition.
  std::string diagnostic;
  /// max |Σ e_i − u| over coordinates.
  double sum_error = 0.0;
  /// min over effects of min(e(ω), 1 − e(ω)) over normalized states.
  double worst_margin = 0.0;
};

/// Checks Σ e_i = u (within `sum_tol`) and 0 ≤ e_i ≤ u on Ω (within
/// `validity_tol`), using the model's exact effect ranges.
MeasurementCheck IsValidMeasurement(const Measurement& m, const SystemModel& sys,
                                    double sum_tol = 1e-12, double validity_tol = 1e-9);

/// Feasibility LP for e_i(ω_j) = δ_ij, Σ e_i = u and e_i ≥ 0 on every state
/// in `validity`. Returns the effects, or nullopt when infeasible; throws
/// kLpNumericalFailure when the solver stalls.
std::optional<std::vector<Vector>> SolveDistinguishingLp(const std::vector<Vector>& states,
                                                         const std::vector<Vector>& validity,
                                                         const Vector& unit);

/// A measurement with e_i(ω_j) = δ_ij (within `tol`) when one exists.
///
/// Polyhedral and classical models solve the LP with the exact vertex
/// constraints. Smooth models first try the model's closed-form candidate,
/// then a cutting-plane LP whose cuts are the exact minimizers of each
/// effect over Ω, so both a returned measurement and a nullopt are
/// certified against the model's exact effect ranges.
std::optional<Measurement> PerfectlyDistinguishable(const std::vector<Vector>& states,
                                                    const SystemModel& sys, double tol = 1e-9);

/// Tω. Throws kNotAState when the image leaves the cone by more than 1e-10.
StateVec ApplyMap(const LinearMapA& t, const StateVec& state, const SystemModel& sys);

struct PositivityCertificate {
  bool positive = false;
  /// True when every extreme ray was checked.
  bool exact = false;
  double worst_margin = 0.0;
};

/// Checks T(A₊) ⊆ A₊ on the extreme rays (polyhedral) or on a pure-state net.
PositivityCertificate CertifyPositive(const Matrix& t, const SystemModel& sys, int net_size = 256,
                                      double tol = 1e-10);

}  // namespace gpt_spectra
