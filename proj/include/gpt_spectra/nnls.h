#pragma once

#include "gpt_spectra/types.h"

namespace gpt_spectra {

struct NnlsResult {
  Vector x;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Lawson–Hanson active-set solution of min ‖A x − b‖₂ subject to x ≥ 0.
NnlsResult SolveNnls(const Matrix& a, const Vector& b, int max_iterations = 0);

}  // namespace gpt_spectra
