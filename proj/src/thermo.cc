#include "gpt_spectra/thermo.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpt_spectra/core.h"
#include "gpt_spectra/random.h"
#include "gpt_spectra/spectral.h"

namespace gpt_spectra {
namespace {

constexpr double kUnitSumTol = 1e-9;
// Separated branches lighter than this are roundoff from an exact zero.
constexpr double kNegligibleWeight = 1e-12;

LedgerStep ZeroStep(std::string name, const CompositeState& c, Assumption assumption) {
  LedgerStep s;
  s.name = std::move(name);
  s.assumption = assumption;
  for (const Branch& b : c.branches) {
    s.work.push_back(0.0);
    s.probability.push_back(b.weight);
  }
  return s;
}

// The protocol on one state, starting from label 0 in a single container of
// volume V and ending with the merged containers holding ω₀.
std::vector<LedgerStep> ForwardProtocol(const Vector& omega, const SystemModel& sys,
                                        double temperature, double k, double volume,
                                        std::vector<std::string>& notes) {
  const std::vector<Filter> filters = SpectralFilters(omega, sys);
  const SeparationMap t = BuildSeparationMap(filters, sys);
  const int n = static_cast<int>(filters.size());

  CompositeState start;
  start.labels = n;
  start.branches.push_back(Branch{0, 1.0, omega});
  start.volumes.assign(n, volume);
  CompositeState separated =
      FromCompositeVector(t.matrix * ToCompositeVector(start, sys.dim()), n, sys);
  separated.volumes = start.volumes;
  const size_t before = separated.branches.size();
  std::erase_if(separated.branches, [](const Branch& b) { return b.weight <= kNegligibleWeight; });
  if (separated.branches.size() < before || static_cast<int>(before) < n) {
    notes.push_back("zero-weight branches dropped before compression");
  }

  std::vector<LedgerStep> steps;
  steps.push_back(ZeroStep("separate", separated, Assumption::kCostlessSeparation));

  Vector target = separated.branches.front().state;
  AlignResult aligned = AdiabaticAlign(separated, target, sys);
  steps.push_back(aligned.step);

  CompositeState& c = aligned.state;
  for (double& v : c.volumes) v = volume;
  steps.push_back(IsothermalCompress(c, temperature, k));

  double merged = 0.0;
  for (const Branch& b : c.branches) merged += c.volumes[b.label];
  if (std::abs(merged - volume) > 1e-12 * volume) {
    notes.push_back("merged volume differs from the initial volume");
  }
  steps.push_back(ZeroStep("merge", c, Assumption::kNone));
  return steps;
}

}  // namespace

Vector ToCompositeVector(const CompositeState& c, int dim) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(c.labels) * dim);
  for (const Branch& b : c.branches) {
    if (b.label < 0 || b.label >= c.labels) throw Error(ErrorCode::kInvalidArgument, "label out of range");
    v.segment(static_cast<Eigen::Index>(b.label) * dim, dim) += b.weight * b.state;
  }
  return v;
}

CompositeState FromCompositeVector(const Vector& v, int labels, const SystemModel& sys) {
  const int dim = sys.dim();
  if (v.size() != static_cast<Eigen::Index>(labels) * dim) {
    throw Error(ErrorCode::kDimensionMismatch, "composite vector has the wrong size");
  }
  CompositeState c;
  c.labels = labels;
  for (int x = 0; x < labels; ++x) {
    const Vector block = v.segment(static_cast<Eigen::Index>(x) * dim, dim);
    const double w = sys.unit().dot(block);
    if (w <= 0.0) continue;
    c.branches.push_back(Branch{x, w, block / w});
  }
  return c;
}

std::string AssumptionName(Assumption a) {
  switch (a) {
    case Assumption::kNone:
      return "none";
    case Assumption::kCostlessSeparation:
      return "costless_separation";
    case Assumption::kAdiabatic:
      return "adiabatic";
  }
  return "none";
}

double LedgerStep::ExpectedWork() const {
  double total = 0.0;
  for (size_t i = 0; i < work.size(); ++i) total += probability[i] * work[i];
  return total;
}

double WorkLedger::ExpectedWork() const {
  double total = 0.0;
  for (const LedgerStep& s : steps) total += s.ExpectedWork();
  return total;
}

SeparationMap BuildSeparationMap(const std::vector<Filter>& filters, const SystemModel& sys,
                                 int samples, std::uint64_t seed) {
  if (filters.empty()) throw Error(ErrorCode::kFiltersIncomplete, "no filters");
  const int dim = sys.dim();
  const int n = static_cast<int>(filters.size());
  Vector unit_sum = Vector::Zero(dim);
  for (const Filter& f : filters) unit_sum += f.map.matrix.transpose() * sys.unit();
  if ((unit_sum - sys.unit()).cwiseAbs().maxCoeff() > kUnitSumTol) {
    throw Error(ErrorCode::kFiltersIncomplete, "filter units do not sum to u");
  }
  SeparationMap s;
  s.labels = n;
  s.matrix = Matrix::Zero(static_cast<Eigen::Index>(n) * dim, static_cast<Eigen::Index>(n) * dim);
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < n; ++i) {
      s.matrix.block(static_cast<Eigen::Index>((x + i) % n) * dim,
                     static_cast<Eigen::Index>(x) * dim, dim, dim) = filters[i].map.matrix;
    }
  }
  Rng rng(seed);
  s.positivity_margin = 1.0;
  Vector composite_unit(static_cast<Eigen::Index>(n) * dim);
  for (int x = 0; x < n; ++x) composite_unit.segment(static_cast<Eigen::Index>(x) * dim, dim) = sys.unit();
  for (int j = 0; j < samples; ++j) {
    const Vector omega = sys.SamplePure(rng);
    for (int x = 0; x < n; ++x) {
      Vector in = Vector::Zero(composite_unit.size());
      in.segment(static_cast<Eigen::Index>(x) * dim, dim) = omega;
      const Vector out = s.matrix * in;
      for (int y = 0; y < n; ++y) {
        const Vector block = out.segment(static_cast<Eigen::Index>(y) * dim, dim);
        if (block.cwiseAbs().maxCoeff() > 1e-14) {
          s.positivity_margin = std::min(s.positivity_margin, sys.ConeMargin(block));
        }
      }
      s.norm_preservation_error = std::max(
          s.norm_preservation_error, std::abs(composite_unit.dot(out) - composite_unit.dot(in)));
    }
  }
  return s;
}

std::vector<Filter> SpectralFilters(const Vector& omega, const SystemModel& sys) {
  const Decomposition dec = Decompose(StateVec{omega}, sys);
  std::vector<Filter> filters;
  Face join;
  for (size_t i = 0; i < dec.parts.size(); ++i) {
    const Face f = sys.FaceOf(dec.parts[i].state);
    filters.push_back(BuildFilter(f, sys));
    join = i == 0 ? f : FaceJoin(join, f, sys);
  }
  Vector unit_sum = Vector::Zero(sys.dim());
  for (const Filter& f : filters) unit_sum += f.unit_effect.coords;
  if ((unit_sum - sys.unit()).cwiseAbs().maxCoeff() > kUnitSumTol) {
    Filter rest = BuildFilter(join, sys);
    std::swap(rest.map, rest.complement);
    rest.face = FaceComplement(join, sys);
    rest.unit_effect.coords = sys.unit() - rest.unit_effect.coords;
    filters.push_back(std::move(rest));
  }
  return filters;
}

AlignResult AdiabaticAlign(const CompositeState& c, const Vector& target, const SystemModel& sys) {
  AlignResult r;
  r.state = c;
  for (Branch& b : r.state.branches) {
    const std::optional<Matrix> g = sys.ReversibleMapBetween(b.state, target);
    if (!g) throw Error(ErrorCode::kNoReversibleMap, "no reversible map onto the target state");
    r.certificate.max_residual =
        std::max(r.certificate.max_residual, (*g * b.state - target).cwiseAbs().maxCoeff());
    r.certificate.maps.push_back(*g);
    b.state = target;
  }
  r.step = ZeroStep("align", r.state, Assumption::kAdiabatic);
  return r;
}

LedgerStep IsothermalCompress(CompositeState& c, double temperature, double k) {
  LedgerStep s;
  s.name = "compress";
  s.heat = true;
  if (c.volumes.size() < static_cast<size_t>(c.labels)) c.volumes.resize(c.labels, 1.0);
  for (const Branch& b : c.branches) {
    if (!(b.weight > 0.0)) throw Error(ErrorCode::kZeroWeightBranch, "branch with zero weight");
  }
  for (const Branch& b : c.branches) {
    s.work.push_back(-k * temperature * std::log(b.weight));
    s.probability.push_back(b.weight);
    c.volumes[b.label] *= b.weight;
  }
  return s;
}

WorkLedger RunVonNeumann(const Vector& omega, const Vector& sigma, const SystemModel& sys,
                         double temperature, double k, double volume) {
  WorkLedger ledger;
  ledger.k = k;
  ledger.temperature = temperature;
  ledger.volume = volume;
  ledger.steps = ForwardProtocol(omega, sys, temperature, k, volume, ledger.notes);
  std::vector<LedgerStep> back = ForwardProtocol(sigma, sys, temperature, k, volume, ledger.notes);
  std::reverse(back.begin(), back.end());
  for (LedgerStep& s : back) {
    s.name = "reverse_" + s.name;
    for (double& w : s.work) w = -w;
    ledger.steps.push_back(std::move(s));
  }
  return ledger;
}

}  // namespace gpt_spectra
