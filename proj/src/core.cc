#include "gpt_spectra/core.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpt_spectra/lp.h"

namespace gpt_spectra {

double Evaluate(const EffectVec& e, const StateVec& state) {
  if (e.coords.size() != state.coords.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "effect and state lengths differ");
  }
  const double v = e.coords.dot(state.coords);
  constexpr double kSlack = 1e-12;
  if (v < -kSlack || v > 1.0 + kSlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "pairing " << v << " outside [0, 1]";
    throw Error(ErrorCode::kOutOfRange, msg.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

MeasurementCheck IsValidMeasurement(const Measurement& m, const SystemModel& sys, double sum_tol,
                                    double validity_tol) {
  MeasurementCheck out;
  if (m.effects.empty()) {
    out.diagnostic = "measurement has no effects";
    return out;
  }
  Vector sum = Vector::Zero(sys.dim());
  for (const EffectVec& e : m.effects) {
    if (e.coords.size() != sys.dim()) {
      out.diagnostic = "effect length does not match the system dimension";
      return out;
    }
    sum += e.coords;
  }
  out.sum_error = (sum - sys.unit()).cwiseAbs().maxCoeff();
  out.worst_margin = 1e300;
  for (size_t i = 0; i < m.effects.size(); ++i) {
    const EffectRange r = sys.RangeOverStates(m.effects[i].coords);
    out.worst_margin = std::min({out.worst_margin, r.min, 1.0 - r.max});
    if (out.diagnostic.empty() && (r.min < -validity_tol || r.max > 1.0 + validity_tol)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "effect " << i << " takes values in [" << r.min << ", " << r.max << "]";
      out.diagnostic = msg.str();
    }
  }
  if (out.sum_error > sum_tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "effects sum to u only within " << out.sum_error;
    out.diagnostic = msg.str();
  }
  out.valid = out.diagnostic.empty();
  return out;
}

std::optional<std::vector<Vector>> SolveDistinguishingLp(const std::vector<Vector>& states,
                                                         const std::vector<Vector>& validity,
                                                         const Vector& unit) {
  const int n = static_cast<int>(states.size());
  const int d = static_cast<int>(unit.size());
  LpProblem lp(n * d, /*all_free=*/true);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vector row = Vector::Zero(n * d);
      row.segment(i * d, d) = states[j];
      lp.Add(row, LpSense::kEqual, i == j ? 1.0 : 0.0);
    }
  }
  // Σ e_i = u. Together with the δ-rows this is linearly redundant; the
  // solver drops redundant equalities after phase 1.
  for (int k = 0; k < d; ++k) {
    Vector row = Vector::Zero(n * d);
    for (int i = 0; i < n; ++i) row(i * d + k) = 1.0;
    lp.Add(row, LpSense::kEqual, unit(k));
  }
  for (int i = 0; i < n; ++i) {
    for (const Vector& v : validity) {
      Vector row = Vector::Zero(n * d);
      row.segment(i * d, d) = v;
      lp.Add(row, LpSense::kGreaterEqual, 0.0);
    }
  }
  const LpResult res = SolveLp(lp);
  if (res.status == LpStatus::kInfeasible) return std::nullopt;
  if (res.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kLpNumericalFailure, "distinguishability LP did not converge");
  }
  std::vector<Vector> effects;
  for (int i = 0; i < n; ++i) effects.push_back(res.x.segment(i * d, d));
  return effects;
}

namespace {

bool DeltaConditionsHold(const std::vector<Vector>& effects, const std::vector<Vector>& states,
                         double tol) {
  for (size_t i = 0; i < effects.size(); ++i) {
    for (size_t j = 0; j < states.size(); ++j) {
      if (std::abs(effects[i].dot(states[j]) - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

Measurement ToMeasurement(const std::vector<Vector>& effects) {
  Measurement m;
  for (const Vector& e : effects) m.effects.push_back({e});
  return m;
}

// Cutting planes for max t subject to e_i(ω_j) = δ_ij, Σ e_i = u and
// e_i ≥ t on the cut states, separating with the model's exact effect ranges.
// A relaxation optimum below −tol proves infeasibility; a solution without
// violated cuts is valid on all of Ω.
std::optional<std::vector<Vector>> DistinguishByCuttingPlanes(const std::vector<Vector>& states,
                                                              const SystemModel& sys,
                                                              double tol) {
  const int n = static_cast<int>(states.size());
  const int d = sys.dim();
  const Vector& u = sys.unit();
  if (n == 1) return std::vector<Vector>{u};
  const int free_effects = n - 1;
  const int t_var = free_effects * d;
  const int vars = t_var + 1;

  LpProblem lp(vars, /*all_free=*/true);
  lp.objective(t_var) = -1.0;
  for (int j = 0; j < n; ++j) {
    Vector last = Vector::Zero(vars);
    for (int i = 0; i < free_effects; ++i) {
      Vector row = Vector::Zero(vars);
      row.segment(i * d, d) = states[j];
      lp.Add(row, LpSense::kEqual, i == j ? 1.0 : 0.0);
      last.segment(i * d, d) = states[j];
    }
    lp.Add(last, LpSense::kEqual, u.dot(states[j]) - (j == n - 1 ? 1.0 : 0.0));
  }
  Vector cap = Vector::Zero(vars);
  cap(t_var) = 1.0;
  lp.Add(cap, LpSense::kLessEqual, 1.0);
  constexpr double kBox = 1e3;
  for (int k = 0; k < t_var; ++k) {
    Vector row = Vector::Zero(vars);
    row(k) = 1.0;
    lp.Add(row, LpSense::kLessEqual, kBox);
    lp.Add(row, LpSense::kGreaterEqual, -kBox);
  }
  auto add_cut = [&](const Vector& s, int i) {
    Vector row = Vector::Zero(vars);
    row(t_var) = -1.0;
    if (i < free_effects) {
      row.segment(i * d, d) = s;
      lp.Add(row, LpSense::kGreaterEqual, 0.0);
    } else {
      for (int k = 0; k < free_effects; ++k) row.segment(k * d, d) = -s;
      lp.Add(row, LpSense::kGreaterEqual, -u.dot(s));
    }
  };
  std::vector<Vector> seeds = sys.PureNet(4 * d);
  seeds.push_back(sys.CenterState());
  for (const Vector& s : seeds) {
    for (int i = 0; i < n; ++i) add_cut(s, i);
  }

  constexpr int kMaxRounds = 400;
  for (int round = 0; round < kMaxRounds; ++round) {
    const LpResult res = SolveLp(lp);
    if (res.status == LpStatus::kInfeasible) return std::nullopt;
    if (res.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kLpNumericalFailure, "distinguishability LP did not converge");
    }
    if (res.x(t_var) < -tol) return std::nullopt;
    std::vector<Vector> effects;
    Vector rest = u;
    for (int i = 0; i < free_effects; ++i) {
      effects.push_back(res.x.segment(i * d, d));
      rest -= effects.back();
    }
    effects.push_back(rest);
    bool cut = false;
    for (int i = 0; i < n; ++i) {
      const EffectRange r = sys.RangeOverStates(effects[i]);
      if (r.min < -0.1 * tol) {
        add_cut(r.argmin, i);
        cut = true;
      }
    }
    if (!cut) return effects;
  }
  throw Error(ErrorCode::kLpNumericalFailure, "cutting planes did not settle");
}

}  // namespace

std::optional<Measurement> PerfectlyDistinguishable(const std::vector<Vector>& states,
                                                    const SystemModel& sys, double tol) {
  if (states.empty()) return Measurement{};
  for (const Vector& s : states) sys.CheckDim(s, "state");
  auto verified = [&](const std::vector<Vector>& effects) {
    return DeltaConditionsHold(effects, states, tol) &&
           IsValidMeasurement(ToMeasurement(effects), sys, 1e-9, tol).valid;
  };
  if (sys.ValidityStatesExact()) {
    const auto effects = SolveDistinguishingLp(states, sys.ValidityStates(), sys.unit());
    if (!effects || !verified(*effects)) return std::nullopt;
    return ToMeasurement(*effects);
  }
  if (const auto candidate = sys.DistinguishingCandidate(states);
      candidate && verified(*candidate)) {
    return ToMeasurement(*candidate);
  }
  const auto effects = DistinguishByCuttingPlanes(states, sys, tol);
  if (!effects || !verified(*effects)) return std::nullopt;
  return ToMeasurement(*effects);
}

StateVec ApplyMap(const LinearMapA& t, const StateVec& state, const SystemModel& sys) {
  sys.CheckDim(state.coords, "state");
  if (t.matrix.rows() != sys.dim() || t.matrix.cols() != sys.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "map does not act on this system");
  }
  StateVec out;
  out.coords = t.matrix * state.coords;
  if (sys.ConeMargin(out.coords) < -1e-10) {
    throw Error(ErrorCode::kNotAState, "image leaves the cone");
  }
  out.normalized = std::abs(sys.unit().dot(out.coords) - 1.0) <= 1e-12;
  return out;
}

PositivityCertificate CertifyPositive(const Matrix& t, const SystemModel& sys, int net_size,
                                      double tol) {
  PositivityCertificate cert;
  std::vector<Vector> rays;
  if (const auto cone = sys.ExactCone()) {
    rays = cone->rays;
    cert.exact = true;
  } else {
    rays = sys.PureNet(net_size);
  }
  cert.worst_margin = 1e300;
  // Margins are taken relative to the input ray so that rounding in a tiny
  // image does not register as a violation.
  for (const Vector& r : rays) {
    const Vector image = t * r;
    const double scale = image.norm() / std::max(r.norm(), 1e-300);
    cert.worst_margin = std::min(cert.worst_margin, sys.ConeMargin(image) * scale);
  }
  cert.positive = cert.worst_margin >= -tol;
  return cert;
}

}  // namespace gpt_spectra
