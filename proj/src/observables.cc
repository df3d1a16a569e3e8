#include "gpt_spectra/observables.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpt_spectra/projective.h"

namespace gpt_spectra {
namespace {

constexpr double kReconstructionTol = 1e-10;

double OrderUnitNorm(const Vector& a, const SystemModel& sys) {
  const EffectRange r = sys.RangeOverStates(a);
  return std::max(std::abs(r.min), std::abs(r.max));
}

bool SameUnits(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Vector& x : a) {
    bool found = false;
    for (size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && (x - b[j]).cwiseAbs().maxCoeff() <= tol) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

SpectralExpansion SpectralExpand(const Vector& a, const SystemModel& sys, double merge_tol) {
  sys.CheckDim(a, "element");
  std::vector<ExpansionTerm> terms = sys.SpectralTerms(a, merge_tol);
  std::stable_sort(terms.begin(), terms.end(), [](const ExpansionTerm& x, const ExpansionTerm& y) {
    return x.coefficient > y.coefficient;
  });
  SpectralExpansion e;
  double top = 0.0;
  for (const auto& t : terms) top = std::max(top, std::abs(t.coefficient));
  Vector sum = Vector::Zero(sys.dim());
  Vector units = Vector::Zero(sys.dim());
  for (auto& t : terms) {
    sum += t.coefficient * t.unit;
    units += t.unit;
    if (std::abs(t.coefficient) <= merge_tol * std::max(1.0, top)) {
      e.zero_term = t;
    } else {
      e.terms.push_back(t);
    }
  }
  for (size_t i = 1; i < terms.size(); ++i) {
    const double gap = terms[i - 1].coefficient - terms[i].coefficient;
    if (gap <= merge_tol * std::max(1.0, top)) e.nondegenerate = false;
  }
  e.reconstruction_error = (sum - a).cwiseAbs().maxCoeff();
  e.orthogonality_violation = std::max(0.0, -sys.RangeOverStates(sys.unit() - units).min);
  for (size_t i = 0; i < terms.size(); ++i) {
    for (size_t j = i + 1; j < terms.size(); ++j) {
      const double m = sys.RangeOverStates(sys.unit() - terms[i].unit - terms[j].unit).min;
      e.orthogonality_violation = std::max(e.orthogonality_violation, -m);
    }
  }
  if (e.reconstruction_error > kReconstructionTol * std::max(1.0, top)) {
    throw Error(ErrorCode::kInvalidArgument, "expansion does not reconstruct the element");
  }
  if (e.orthogonality_violation > kReconstructionTol) {
    throw Error(ErrorCode::kInvalidArgument, "expansion units are not mutually orthogonal");
  }
  return e;
}

std::vector<ExpansionTerm> AllTerms(const SpectralExpansion& e) {
  std::vector<ExpansionTerm> all = e.terms;
  if (e.zero_term) all.push_back(*e.zero_term);
  std::stable_sort(all.begin(), all.end(), [](const ExpansionTerm& x, const ExpansionTerm& y) {
    return x.coefficient > y.coefficient;
  });
  return all;
}

Vector SpectralFamily::UnitAt(double lambda) const {
  Vector e = Vector::Zero(units.empty() ? 0 : units.front().size());
  for (size_t j = 0; j < thresholds.size(); ++j) {
    if (thresholds[j] <= lambda) e = units[j];
  }
  return e;
}

SpectralFamily MakeSpectralFamily(const Vector& a, const SystemModel& sys, double merge_tol) {
  std::vector<ExpansionTerm> terms = AllTerms(SpectralExpand(a, sys, merge_tol));
  std::reverse(terms.begin(), terms.end());
  SpectralFamily f;
  Vector running = Vector::Zero(sys.dim());
  for (const auto& t : terms) {
    running += t.unit;
    f.thresholds.push_back(t.coefficient);
    f.increments.push_back(t.unit);
    f.units.push_back(running);
  }
  f.theta = std::numeric_limits<double>::infinity();
  for (size_t j = 1; j < f.thresholds.size(); ++j) {
    f.theta = std::min(f.theta, f.thresholds[j] - f.thresholds[j - 1]);
  }
  return f;
}

std::vector<double> UniformGrid(double lo, double hi, double mesh) {
  if (!(hi > lo) || !(mesh > 0.0)) throw Error(ErrorCode::kInvalidArgument, "empty grid");
  const int steps = static_cast<int>(std::ceil((hi - lo) / mesh - 1e-12));
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) g.push_back(std::min(hi, lo + i * mesh));
  g.back() = lo + steps * mesh;
  return g;
}

RiemannReport RiemannStabilizationDemo(const Vector& a, const SystemModel& sys,
                                       const std::vector<std::vector<double>>& grids) {
  const SpectralExpansion expansion = SpectralExpand(a, sys);
  const SpectralFamily family = MakeSpectralFamily(a, sys);
  std::vector<Vector> expansion_units;
  for (const auto& t : AllTerms(expansion)) expansion_units.push_back(t.unit);

  RiemannReport r;
  r.theta = family.theta;
  r.norm = OrderUnitNorm(a, sys);
  for (const auto& grid : grids) {
    if (grid.size() < 2 || !(grid.front() < -r.norm) || !(grid.back() > r.norm)) {
      throw Error(ErrorCode::kGridOutOfBounds, "grid must start below -|a| and end above |a|");
    }
    for (size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) {
        throw Error(ErrorCode::kGridOutOfBounds, "grid is not strictly increasing");
      }
    }
  }
  std::optional<std::vector<Vector>> fine_reference;
  for (const auto& grid : grids) {
    GridResult g;
    g.riemann_sum = Vector::Zero(sys.dim());
    for (size_t i = 1; i < grid.size(); ++i) {
      g.mesh = std::max(g.mesh, grid[i] - grid[i - 1]);
      // e_{λ_i} − e_{λ_{i−1}} is the sum of the increments at thresholds in
      // (λ_{i−1}, λ_i].
      Vector diff = Vector::Zero(sys.dim());
      bool any = false;
      for (size_t j = 0; j < family.thresholds.size(); ++j) {
        if (family.thresholds[j] > grid[i - 1] && family.thresholds[j] <= grid[i]) {
          diff += family.increments[j];
          any = true;
        }
      }
      if (!any) continue;
      g.riemann_sum += grid[i] * diff;
      g.difference_units.push_back(diff);
    }
    g.error = OrderUnitNorm(g.riemann_sum - a, sys);
    g.finer_than_theta = g.mesh < r.theta;
    g.matches_expansion = SameUnits(g.difference_units, expansion_units, 0.0);
    if (g.finer_than_theta) {
      const bool same_as_other_fine =
          !fine_reference || SameUnits(g.difference_units, *fine_reference, 0.0);
      if (!fine_reference) fine_reference = g.difference_units;
      if (!g.matches_expansion || !same_as_other_fine || g.error > g.mesh * (1.0 + 1e-12) + 1e-12) {
        r.stabilized = false;
      }
    }
    r.grids.push_back(std::move(g));
  }
  return r;
}

StateExpansion FinegrainedStateExpansion(const Vector& x, const SystemModel& sys,
                                         const PhiMap& phi) {
  sys.CheckDim(x, "element");
  StateExpansion out;
  if (x.cwiseAbs().maxCoeff() == 0.0) return out;
  const Vector a = phi.matrix.fullPivLu().solve(x);
  const SpectralExpansion e = SpectralExpand(a, sys);
  Vector sum = Vector::Zero(sys.dim());
  for (const auto& t : e.terms) {
    for (const Vector& atom : sys.AtomicRefinement(t.unit)) {
      StateTerm term{t.coefficient, phi.matrix * atom};
      sum += term.coefficient * term.state;
      out.terms.push_back(std::move(term));
    }
  }
  out.reconstruction_error = (sum - x).cwiseAbs().maxCoeff();
  std::vector<Face> faces, complements;
  for (const auto& t : out.terms) {
    faces.push_back(sys.FaceOf(t.state));
    complements.push_back(FaceComplement(faces.back(), sys, &phi.state_form));
  }
  for (size_t i = 0; i < faces.size() && out.orthogonal; ++i) {
    for (size_t j = 0; j < faces.size(); ++j) {
      if (i != j && !FaceLeq(faces[i], complements[j])) {
        out.orthogonal = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace gpt_spectra
