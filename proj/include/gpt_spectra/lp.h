#pragma once

#include <vector>

#include "gpt_spectra/types.h"

namespace gpt_spectra {

enum class LpSense { kLessEqual, kGreaterEqual, kEqual };

struct LpConstraint {
  Vector coeffs;
  LpSense sense = LpSense::kEqual;
  double rhs = 0.0;
};

/// minimize objectiveᵀ x subject to the constraints; variables flagged in
/// `free` are unrestricted, all others are nonnegative.
struct LpProblem {
  int num_vars = 0;
  std::vector<bool> free;
  Vector objective;
  std::vector<LpConstraint> constraints;

  explicit LpProblem(int n, bool all_free = false)
      : num_vars(n), free(n, all_free), objective(Vector::Zero(n)) {}

  void Add(Vector coeffs, LpSense sense, double rhs) {
    constraints.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  int max_iterations = 50000;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule. Intended for
/// the small feasibility problems this library poses (tens of variables).
LpResult SolveLp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace gpt_spectra
