#include "gpt_spectra/lp.h"

#include <cmath>
#include <limits>

#include "gpt_spectra/errors.h"

namespace gpt_spectra {
namespace {

// Tableau over standard-form columns; row m is the objective row holding
// reduced costs, column `cols` holds the right-hand side.
class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Matrix& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }

  void Pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) {
        t_.row(i) -= t_(i, c) * t_.row(r);
      }
    }
    basis_[r] = c;
  }

  // Returns false on unboundedness. `allowed` limits entering columns.
  LpStatus Run(const std::vector<bool>& allowed, const LpOptions& opt, int* iterations) {
    while (true) {
      if (++(*iterations) > opt.max_iterations) return LpStatus::kIterationLimit;
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[j] && t_(rows(), j) < -opt.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a > opt.pivot_tol) {
          const double ratio = t_(i, cols()) / a;
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      Pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult SolveLp(const LpProblem& problem, const LpOptions& options) {
  const int n = problem.num_vars;
  const int m = static_cast<int>(problem.constraints.size());

  // Column layout: split free variables, then one slack per inequality.
  std::vector<int> pos_col(n), neg_col(n, -1);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = cols++;
    if (problem.free[j]) neg_col[j] = cols++;
  }
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i) {
    if (problem.constraints[i].sense != LpSense::kEqual) slack_col[i] = cols++;
  }
  const int structural = cols;
  const int total = structural + m;  // plus one artificial per row

  Tableau tab(m, total);
  Matrix& t = tab.t();
  for (int i = 0; i < m; ++i) {
    const LpConstraint& c = problem.constraints[i];
    if (c.coeffs.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "LP constraint length mismatch");
    }
    for (int j = 0; j < n; ++j) {
      t(i, pos_col[j]) = c.coeffs(j);
      if (neg_col[j] >= 0) t(i, neg_col[j]) = -c.coeffs(j);
    }
    if (slack_col[i] >= 0) t(i, slack_col[i]) = c.sense == LpSense::kLessEqual ? 1.0 : -1.0;
    t(i, total) = c.rhs;
    if (c.rhs < 0) t.row(i) *= -1.0;
    t(i, structural + i) = 1.0;
    tab.basis()[i] = structural + i;
  }

  // Phase 1: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, structural + i) = 0.0;

  LpResult result;
  std::vector<bool> allowed(total, true);
  LpStatus status = tab.Run(allowed, options, &result.iterations);
  if (status == LpStatus::kIterationLimit) {
    result.status = status;
    return result;
  }
  double scale = 1.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(problem.constraints[i].rhs));
  if (-t(m, total) > options.feasibility_tol * scale) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  // Drive artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[i] < structural) continue;
    bool pivoted = false;
    for (int j = 0; j < structural && !pivoted; ++j) {
      if (std::abs(t(i, j)) > options.pivot_tol) {
        tab.Pivot(i, j);
        pivoted = true;
      }
    }
    // A redundant equality: its row is a combination of the others. Zero it so
    // it never takes part in a phase-2 ratio test.
    if (!pivoted) t.row(i).setZero();
  }
  for (int j = structural; j < total; ++j) allowed[j] = false;

  // Phase 2: original objective expressed in reduced costs.
  t.row(m).setZero();
  for (int j = 0; j < n; ++j) {
    t(m, pos_col[j]) = problem.objective(j);
    if (neg_col[j] >= 0) t(m, neg_col[j]) = -problem.objective(j);
  }
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis()[i];
    if (b < structural && t(m, b) != 0.0) t.row(m) -= t(m, b) * t.row(i);
  }
  status = tab.Run(allowed, options, &result.iterations);
  result.status = status;
  if (status != LpStatus::kOptimal) return result;

  Vector standard = Vector::Zero(total);
  for (int i = 0; i < m; ++i) standard(tab.basis()[i]) = t(i, total);
  result.x.resize(n);
  for (int j = 0; j < n; ++j) {
    result.x(j) = standard(pos_col[j]) - (neg_col[j] >= 0 ? standard(neg_col[j]) : 0.0);
  }
  result.objective = problem.objective.dot(result.x);
  return result;
}

}  // namespace gpt_spectra
