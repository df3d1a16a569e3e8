#include "gpt_spectra/majorization.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gpt_spectra/core.h"
#include "gpt_spectra/nnls.h"
#include "gpt_spectra/parallel.h"

namespace gpt_spectra {
namespace {

constexpr double kSumTol = 1e-12;
constexpr int kMaxSamplingAttempts = 200;

// Descending copies of x and y zero-padded to a common length.
std::pair<Vector, Vector> SortedPair(const Vector& y, const Vector& x) {
  const Eigen::Index n = std::max(x.size(), y.size());
  Vector a = Vector::Zero(n), b = Vector::Zero(n);
  a.head(y.size()) = y;
  b.head(x.size()) = x;
  std::stable_sort(a.data(), a.data() + n, std::greater<>());
  std::stable_sort(b.data(), b.data() + n, std::greater<>());
  return {a, b};
}

bool PartialSumsDominate(const Vector& y, const Vector& x, double tol) {
  const auto [a, b] = SortedPair(y, x);
  double sa = 0.0, sb = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    sa += a(k);
    sb += b(k);
    if (sb > sa + tol) return false;
  }
  return true;
}

}  // namespace

bool Majorizes(const Vector& y, const Vector& x, double tol) {
  return PartialSumsDominate(y, x, tol) && std::abs(y.sum() - x.sum()) <= tol;
}

bool WeakMajorizes(const Vector& y, const Vector& x, double tol) {
  return PartialSumsDominate(y, x, tol);
}

double PartialSumMargin(const Vector& y, const Vector& x) {
  const auto [a, b] = SortedPair(y, x);
  double sa = 0.0, sb = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    sa += a(k);
    sb += b(k);
    margin = std::min(margin, sa - sb);
  }
  return a.size() == 0 ? 0.0 : margin;
}

bool IsDoublySubstochastic(const Matrix& m, double tol) {
  if (m.size() > 0 && m.minCoeff() < -tol) {
    throw Error(ErrorCode::kNegativeEntry, "matrix has an entry below -tol");
  }
  if (m.size() == 0) return true;
  return m.rowwise().sum().maxCoeff() <= 1.0 + tol && m.colwise().sum().maxCoeff() <= 1.0 + tol;
}

std::optional<Vector> WeakMajorizationWitness(const Matrix& m, double tol) {
  const Eigen::Index n = m.cols();
  std::vector<Vector> candidates;
  for (Eigen::Index j = 0; j < n; ++j) candidates.push_back(Vector::Unit(n, j));
  candidates.push_back(Vector::Ones(n));
  for (const Vector& y : candidates) {
    const Vector my = m * y;
    if (my.size() > 0 && my.minCoeff() < -tol) return y;
    if (!WeakMajorizes(y, my, tol)) return y;
  }
  return std::nullopt;
}

std::vector<AtomicSplit> FineGrainedSplit(const Measurement& m, const SystemModel& sys) {
  std::vector<AtomicSplit> out;
  Vector total = Vector::Zero(sys.dim());
  for (size_t i = 0; i < m.effects.size(); ++i) {
    sys.CheckDim(m.effects[i].coords, "effect");
    auto split = sys.SplitAtomic(m.effects[i].coords);
    if (!split) {
      throw Error(ErrorCode::kNotFineGrained,
                  "effect " + std::to_string(i) + " is not a multiple of an atomic effect");
    }
    total += split->scale * split->atom;
    out.push_back(std::move(*split));
  }
  const double err = (total - sys.unit()).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw Error(ErrorCode::kInvalidArgument,
                "effects do not sum to the unit (error " + std::to_string(err) + ")");
  }
  return out;
}

TransitionMatrix BuildTransitionMatrix(const Measurement& fine_grained, const Decomposition& dec,
                                       const SystemModel& sys) {
  if (!dec.certified_distinguishable) {
    throw Error(ErrorCode::kInvalidArgument, "decomposition is not certified distinguishable");
  }
  const auto splits = FineGrainedSplit(fine_grained, sys);
  const int rows = static_cast<int>(splits.size());
  const int cols = static_cast<int>(dec.parts.size());
  TransitionMatrix t;
  t.m.resize(rows, cols);
  t.row_scalars.resize(rows);
  for (int i = 0; i < rows; ++i) {
    t.row_scalars(i) = splits[i].scale;
    t.atoms.push_back(splits[i].atom);
    for (int j = 0; j < cols; ++j) {
      t.m(i, j) = splits[i].scale * splits[i].atom.dot(dec.parts[j].state);
    }
  }
  for (const auto& p : dec.parts) t.spectral_states.push_back(p.state);
  for (int j = 0; j < cols; ++j) {
    t.stochastic_error = std::max(t.stochastic_error, std::abs(t.m.col(j).sum() - 1.0));
  }
  t.max_row_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    t.max_row_excess = std::max(t.max_row_excess, t.m.row(i).sum() - t.row_scalars(i));
  }
  if (rows == 0) t.max_row_excess = 0.0;
  return t;
}

Measurement SampleFineGrainedMeasurement(const SystemModel& sys, Rng& rng) {
  const int d = sys.dim();
  const int k = 3 * d;
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    Matrix atoms(d, k);
    for (int j = 0; j < k; ++j) atoms.col(j) = sys.SampleAtom(rng);
    const NnlsResult fit = SolveNnls(atoms, sys.unit());
    if (!fit.converged || fit.residual_norm > kSumTol) continue;

    std::vector<Vector> effects;
    Vector total = Vector::Zero(d);
    for (int j = 0; j < k; ++j) {
      if (fit.x(j) <= 1e-14) continue;
      const Vector e = fit.x(j) * atoms.col(j);
      if (rng.Uniform() < 0.3) {
        const double t = rng.Uniform(0.2, 0.8);
        effects.push_back(t * e);
        effects.push_back((1.0 - t) * e);
      } else {
        effects.push_back(e);
      }
      total += e;
    }
    if ((total - sys.unit()).cwiseAbs().maxCoeff() > kSumTol) continue;
    std::shuffle(effects.begin(), effects.end(), rng.engine());
    Measurement m;
    for (auto& e : effects) m.effects.push_back(EffectVec{std::move(e)});
    return m;
  }
  throw Error(ErrorCode::kLpNumericalFailure,
              "could not complete random atoms to a measurement");
}

Measurement SpectralMeasurement(const Decomposition& dec, const SystemModel& sys) {
  Measurement m;
  Vector rest = sys.unit();
  for (const auto& p : dec.parts) {
    Vector t = sys.Tilde(p.state);
    rest -= t;
    m.effects.push_back(EffectVec{std::move(t)});
  }
  if (rest.cwiseAbs().maxCoeff() > 1e-10) {
    for (auto& a : sys.AtomicRefinement(rest)) m.effects.push_back(EffectVec{std::move(a)});
  }
  return m;
}

Vector OutcomeDistribution(const Measurement& m, const Vector& state) {
  Vector q(static_cast<Eigen::Index>(m.effects.size()));
  for (size_t i = 0; i < m.effects.size(); ++i) {
    q(static_cast<Eigen::Index>(i)) = std::max(0.0, m.effects[i].coords.dot(state));
  }
  return q;
}

MajorizationReport VerifyTheoremMajorization(const SystemModel& sys, const StateVec& state,
                                             int n_measurements, std::uint64_t seed) {
  const Decomposition dec = Decompose(state, sys, /*certify=*/true);
  const Spectrum spec = SpectrumOf(dec, sys.max_distinguishable());
  Vector p(static_cast<Eigen::Index>(dec.parts.size()));
  for (size_t j = 0; j < dec.parts.size(); ++j) p(static_cast<Eigen::Index>(j)) = dec.parts[j].probability;

  struct Trial {
    bool violated = false;
    double margin = 0.0;
    double total_dev = 0.0;
    double residual = 0.0;
    double stochastic = 0.0;
    double excess = 0.0;
  };
  std::vector<Trial> trials(std::max(0, n_measurements));
  ParallelFor(n_measurements, [&](int i) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
    const Measurement m = SampleFineGrainedMeasurement(sys, rng);
    const Vector q = OutcomeDistribution(m, state.coords);
    Trial& t = trials[i];
    t.violated = !Majorizes(spec.probs, q);
    t.margin = PartialSumMargin(spec.probs, q);
    t.total_dev = std::abs(spec.probs.sum() - q.sum());
    if (dec.certified_distinguishable) {
      const TransitionMatrix tm = BuildTransitionMatrix(m, dec, sys);
      t.residual = (q - tm.m * p).cwiseAbs().maxCoeff();
      t.stochastic = tm.stochastic_error;
      t.excess = tm.max_row_excess;
    }
  });

  MajorizationReport report;
  report.trials = n_measurements;
  report.spectrum = spec.probs;
  report.worst_margin = trials.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  report.max_row_excess = trials.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (const Trial& t : trials) {
    report.violations += t.violated ? 1 : 0;
    report.worst_margin = std::min(report.worst_margin, t.margin);
    report.max_total_deviation = std::max(report.max_total_deviation, t.total_dev);
    report.max_transition_residual = std::max(report.max_transition_residual, t.residual);
    report.max_stochastic_error = std::max(report.max_stochastic_error, t.stochastic);
    report.max_row_excess = std::max(report.max_row_excess, t.excess);
  }
  return report;
}

MeasurementEntropyResult MeasurementEntropy(const StateVec& state, const SystemModel& sys,
                                            int budget, std::uint64_t seed, LogBase base) {
  MeasurementEntropyResult out;
  const Decomposition dec = Decompose(state, sys, /*certify=*/false);
  out.spectral_entropy = EntropyOf(SpectrumOf(dec, sys.max_distinguishable()).probs, base);
  try {
    const Measurement spectral = SpectralMeasurement(dec, sys);
    if (IsValidMeasurement(spectral, sys, 1e-10).valid) {
      out.spectral_measurement_entropy =
          EntropyOf(OutcomeDistribution(spectral, state.coords), base);
    }
  } catch (const Error&) {
    // Models without a tilde map or atomic refinement have no spectral
    // measurement; only the sampled search remains.
  }

  std::vector<double> sampled(std::max(0, budget));
  ParallelFor(budget, [&](int i) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
    const Measurement m = SampleFineGrainedMeasurement(sys, rng);
    sampled[i] = EntropyOf(OutcomeDistribution(m, state.coords), base);
  });
  out.searched = budget;
  out.best_sampled = sampled.empty() ? std::numeric_limits<double>::infinity()
                                     : *std::min_element(sampled.begin(), sampled.end());
  out.value = out.best_sampled;
  if (out.spectral_measurement_entropy) {
    out.value = std::min(out.value, *out.spectral_measurement_entropy);
  }
  return out;
}

GroupAverageReport GroupAverageMajorization(const SystemModel& sys, const StateVec& state,
                                            const std::vector<Matrix>& maps,
                                            std::vector<double> weights) {
  if (maps.empty()) throw Error(ErrorCode::kInvalidArgument, "no maps to average over");
  if (weights.empty()) weights.assign(maps.size(), 1.0 / static_cast<double>(maps.size()));
  if (weights.size() != maps.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weights and maps differ in length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw Error(ErrorCode::kInvalidArgument, "negative mixing weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "mixing weights do not sum to 1");
  }
  GroupAverageReport r;
  r.mixture = Vector::Zero(sys.dim());
  for (size_t k = 0; k < maps.size(); ++k) r.mixture += weights[k] * (maps[k] * state.coords);
  r.input_spectrum = ComputeSpectrum(state, sys).probs;
  r.mixture_spectrum = ComputeSpectrum(StateVec{r.mixture}, sys).probs;
  r.majorized = Majorizes(r.input_spectrum, r.mixture_spectrum);
  r.margin = PartialSumMargin(r.input_spectrum, r.mixture_spectrum);
  return r;
}

GroupAverageReport GroupAverageMajorization(const SystemModel& sys, const StateVec& state,
                                            int n_group_samples, std::vector<double> weights,
                                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> maps;
  for (int k = 0; k < n_group_samples; ++k) maps.push_back(sys.SampleReversible(rng));
  return GroupAverageMajorization(sys, state, maps, std::move(weights));
}

}  // namespace gpt_spectra
