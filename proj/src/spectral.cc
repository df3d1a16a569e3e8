#include "gpt_spectra/spectral.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpt_spectra/core.h"
#include "gpt_spectra/parallel.h"

namespace gpt_spectra {
namespace {

void RequireNormalized(const StateVec& state, const SystemModel& sys) {
  sys.CheckDim(state.coords, "state");
  if (std::abs(sys.unit().dot(state.coords) - 1.0) > 1e-10) {
    throw Error(ErrorCode::kNotAState, "state is not normalized");
  }
}

Vector SortedPadded(const std::vector<WeightedState>& parts, int n_max) {
  std::vector<double> p;
  for (const auto& w : parts) p.push_back(w.probability);
  std::sort(p.begin(), p.end(), std::greater<>());
  Vector out = Vector::Zero(std::max<int>(n_max, static_cast<int>(p.size())));
  for (size_t i = 0; i < p.size(); ++i) out(static_cast<Eigen::Index>(i)) = p[i];
  return out;
}

double SupGap(const Vector& a, const Vector& b) {
  const Eigen::Index n = std::max(a.size(), b.size());
  Vector pa = Vector::Zero(n), pb = Vector::Zero(n);
  pa.head(a.size()) = a;
  pb.head(b.size()) = b;
  return (pa - pb).cwiseAbs().maxCoeff();
}

}  // namespace

Decomposition Decompose(const StateVec& state, const SystemModel& sys, bool certify) {
  RequireNormalized(state, sys);
  Decomposition dec;
  for (auto& part : sys.Decompose(state.coords)) {
    if (part.probability > 0.0) dec.parts.push_back(std::move(part));
  }
  if (certify) {
    std::vector<Vector> pure;
    for (const auto& p : dec.parts) pure.push_back(p.state);
    dec.certified_distinguishable = PerfectlyDistinguishable(pure, sys).has_value();
  }
  return dec;
}

Spectrum SpectrumOf(const Decomposition& dec, int n_max) {
  return Spectrum{SortedPadded(dec.parts, n_max), n_max};
}

Spectrum ComputeSpectrum(const StateVec& state, const SystemModel& sys) {
  return SpectrumOf(Decompose(state, sys, /*certify=*/false), sys.max_distinguishable());
}

double EntropyOf(const Vector& probs, LogBase base) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) h -= probs(i) * std::log(probs(i));
  }
  return base == LogBase::kTwo ? h / std::log(2.0) : h;
}

double SpectralEntropy(const StateVec& state, const SystemModel& sys, LogBase base) {
  return EntropyOf(ComputeSpectrum(state, sys).probs, base);
}

SchurValue SchurFunctional(const StateVec& state, const SystemModel& sys,
                           const SymmetricFunction& f, std::uint64_t seed) {
  const Spectrum spec = ComputeSpectrum(state, sys);
  Rng rng(seed);
  auto spot_check = [&](const Vector& p) {
    const double base = f(p);
    std::vector<int> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(perm.begin(), perm.end(), rng.engine());
      Vector q(p.size());
      for (Eigen::Index i = 0; i < p.size(); ++i) q(i) = p(perm[i]);
      const double v = f(q);
      if (std::abs(v - base) > 1e-12 * std::max(1.0, std::abs(base))) {
        throw Error(ErrorCode::kAsymmetricFunction, "function changes under a permutation");
      }
    }
  };
  spot_check(spec.probs);
  Vector random(spec.probs.size());
  for (Eigen::Index i = 0; i < random.size(); ++i) random(i) = rng.Uniform();
  spot_check(random / random.sum());

  SchurValue out;
  out.value = f(spec.probs);
  const auto all = sys.EnumerateDecompositions(state.coords);
  for (const auto& dec : all) {
    if (SupGap(SortedPadded(dec, spec.n_max), spec.probs) > 1e-9) out.ambiguous = true;
  }
  return out;
}

AxiomSReport CheckAxiomS(const SystemModel& sys, int n_samples, std::uint64_t seed, double tol) {
  std::vector<Vector> states{sys.CenterState()};
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
    states.push_back(sys.SampleState(rng));
  }
  struct Result {
    bool undecomposable = false;
    double gap = 0.0;
    Vector first, second;
  };
  std::vector<Result> results(states.size());
  const int n_max = sys.max_distinguishable();
  ParallelFor(static_cast<int>(states.size()), [&](int i) {
    const auto decs = sys.EnumerateDecompositions(states[i]);
    if (decs.empty()) {
      results[i].undecomposable = true;
      return;
    }
    std::vector<Vector> spectra;
    for (const auto& d : decs) spectra.push_back(SortedPadded(d, n_max));
    for (size_t a = 0; a < spectra.size(); ++a) {
      for (size_t b = a + 1; b < spectra.size(); ++b) {
        const double g = SupGap(spectra[a], spectra[b]);
        if (g > results[i].gap) results[i] = {false, g, spectra[a], spectra[b]};
      }
    }
  });
  AxiomSReport report;
  report.states_checked = static_cast<int>(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    if (results[i].undecomposable) {
      ++report.undecomposable;
      continue;
    }
    if (results[i].gap > report.max_gap) {
      report.max_gap = results[i].gap;
      if (results[i].gap > tol) {
        report.witness = AxiomSWitness{states[i], results[i].first, results[i].second};
      }
    }
  }
  report.holds = !report.witness.has_value();
  return report;
}

AxiomWSReport CheckAxiomWS(const SystemModel& sys, int n_samples, std::uint64_t seed) {
  std::vector<Vector> states{sys.CenterState()};
  for (int i = 0; i < n_samples; ++i) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
    states.push_back(sys.SampleState(rng));
  }
  std::vector<char> ok(states.size(), 0);
  ParallelFor(static_cast<int>(states.size()), [&](int i) {
    try {
      ok[i] = Decompose(StateVec{states[i]}, sys, /*certify=*/true).certified_distinguishable;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDecompositionUnavailable) throw;
    }
  });
  AxiomWSReport report;
  report.states_checked = static_cast<int>(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    if (ok[i]) continue;
    ++report.failures;
    if (!report.witness) report.witness = states[i];
  }
  report.holds = report.failures == 0;
  return report;
}

}  // namespace gpt_spectra
