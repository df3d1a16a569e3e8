// Runs the ten acceptance criteria at their stated tolerances and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gpt_spectra/catalog.h"
#include "gpt_spectra/cli.h"
#include "gpt_spectra/majorization.h"
#include "gpt_spectra/observables.h"
#include "gpt_spectra/perfection.h"
#include "gpt_spectra/spectral.h"
#include "gpt_spectra/thermo.h"

namespace gpt_spectra {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Named {
  std::string name;
  ModelPtr model;
};

std::string Fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

Vector SortedDesc(Vector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

double SupDistance(const Vector& a, const Vector& b) {
  const Eigen::Index n = std::max(a.size(), b.size());
  Vector pa = Vector::Zero(n), pb = Vector::Zero(n);
  pa.head(a.size()) = a;
  pb.head(b.size()) = b;
  return (pa - pb).cwiseAbs().maxCoeff();
}

Vector Probabilities(const std::vector<WeightedState>& parts) {
  Vector p(static_cast<Eigen::Index>(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i) p(static_cast<Eigen::Index>(i)) = parts[i].probability;
  return SortedDesc(p);
}

// 1. Outcome distributions of fine-grained measurements are majorized by the spectrum.
Outcome MajorizationTheorem() {
  Outcome o;
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  const std::vector<Named> models = {
      {"quantum(2)", MakeQuantum(2)}, {"quantum(3)", MakeQuantum(3)}, {"ball(3)", MakeBall(3)},
      {"classical(4)", MakeClassical(4)}};
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    Rng rng(DeriveSeed(1, mi));
    for (int s = 0; s < 200; ++s) {
      const MajorizationReport r =
          VerifyTheoremMajorization(sys, StateVec{sys.SampleState(rng)}, 200, DeriveSeed(1000 + mi, s));
      violations += r.violations;
      worst = std::min(worst, r.worst_margin);
      if (r.worst_margin < -1e-10) ++violations;
    }
  }
  o.pass = violations == 0;
  o.detail = "violations=" + std::to_string(violations) + " worst_margin=" + Fmt("%.3g", worst);
  return o;
}

// 2. Forward and witness-based converse checks against row/column sums.
Outcome DoublySubstochastic() {
  Outcome o;
  Rng rng(2);
  int discrepancies = 0, substochastic = 0;
  for (int t = 0; t < 10000; ++t) {
    const int rows = rng.UniformInt(1, 5), cols = rng.UniformInt(1, 5);
    Matrix m(rows, cols);
    const double scale = rng.Uniform(0.1, 1.5) / std::max(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = scale * 2.0 * rng.Uniform();
    }
    const bool by_sums = m.rowwise().sum().maxCoeff() <= 1.0 && m.colwise().sum().maxCoeff() <= 1.0;
    substochastic += by_sums;
    bool ok = IsDoublySubstochastic(m) == by_sums;
    const std::optional<Vector> witness = WeakMajorizationWitness(m);
    ok = ok && witness.has_value() != by_sums;
    if (witness) ok = ok && !WeakMajorizes(*witness, m * *witness);
    if (by_sums) {
      Vector x(cols);
      for (int j = 0; j < cols; ++j) x(j) = rng.Uniform();
      ok = ok && WeakMajorizes(x, m * x);
    }
    discrepancies += !ok;
  }
  o.pass = discrepancies == 0;
  o.detail = "discrepancies=" + std::to_string(discrepancies) + " substochastic=" + std::to_string(substochastic) +
             "/10000";
  return o;
}

// 3. Measurement entropy equals spectral entropy, attained by the spectral measurement.
Outcome EntropyEquality() {
  Outcome o;
  const std::vector<Named> models = {{"classical(3)", MakeClassical(3)}, {"quantum(2)", MakeQuantum(2)},
                                     {"quantum(3)", MakeQuantum(3)},     {"ball(3)", MakeBall(3)},
                                     {"ellipse(2,1)", MakeEllipse(2, 1)}};
  int failures = 0;
  double worst_gap = 0.0;
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    Rng rng(DeriveSeed(3, mi));
    for (int s = 0; s < 50; ++s) {
      const MeasurementEntropyResult r =
          MeasurementEntropy(StateVec{sys.SampleState(rng)}, sys, 1000, DeriveSeed(3000 + mi, s));
      const double gap = r.value - r.spectral_entropy;
      worst_gap = std::min(worst_gap, gap);
      const bool attains = r.spectral_measurement_entropy.has_value() &&
                           std::abs(*r.spectral_measurement_entropy - r.spectral_entropy) <= 1e-9 &&
                           *r.spectral_measurement_entropy <= r.best_sampled + 1e-9;
      failures += gap < -1e-9 || gap > 1e-9 || !attains;
    }
  }
  o.pass = failures == 0;
  o.detail = "failures=" + std::to_string(failures) + " min(S_meas-S)=" + Fmt("%.3g", worst_gap);
  return o;
}

// Largest sup-norm gap between sorted probability vectors of two decompositions.
double LargestSpectrumGap(const SystemModel& sys, const Vector& state) {
  const auto decs = sys.EnumerateDecompositions(state);
  double gap = 0.0;
  for (size_t i = 0; i < decs.size(); ++i) {
    for (size_t j = i + 1; j < decs.size(); ++j) {
      gap = std::max(gap, SupDistance(Probabilities(decs[i]), Probabilities(decs[j])));
    }
  }
  return gap;
}

double SearchSpectrumGap(const SystemModel& sys, int samples, std::uint64_t seed) {
  Rng rng(seed);
  double gap = LargestSpectrumGap(sys, sys.CenterState());
  for (int s = 0; s < samples; ++s) gap = std::max(gap, LargestSpectrumGap(sys, sys.SampleState(rng)));
  return gap;
}

// 4. Axiom S fails on the bipyramid barycenter and on a witness of ellipse(2,1).
Outcome AxiomSCounterexamples(std::string& info) {
  Outcome o;
  const ModelPtr bp = MakeBipyramid();
  std::vector<Vector> distinct;
  for (const auto& d : bp->EnumerateDecompositions(bp->CenterState())) {
    const Vector p = Probabilities(d);
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Vector& q) {
      return q.size() == p.size() && (q - p).cwiseAbs().maxCoeff() <= 1e-12;
    });
    if (!seen) distinct.push_back(p);
  }
  const Vector third = Vector::Constant(3, 1.0 / 3);
  const Vector half = Vector::Constant(2, 0.5);
  auto has = [&](const Vector& target) {
    return std::any_of(distinct.begin(), distinct.end(), [&](const Vector& q) {
      return q.size() == target.size() && (q - target).cwiseAbs().maxCoeff() <= 1e-12;
    });
  };
  const bool bipyramid_ok = distinct.size() == 2 && has(third) && has(half);

  const double ellipse_gap = SearchSpectrumGap(*MakeEllipse(2, 1), 200, 4);
  const bool ellipse_ok = ellipse_gap >= 0.05;
  o.pass = bipyramid_ok && ellipse_ok;
  o.detail = std::string("bipyramid ") + (bipyramid_ok ? "ok" : "mismatch") + " (" +
             std::to_string(distinct.size()) + " distinct spectra); ellipse(2,1) largest gap=" +
             Fmt("%.3g", ellipse_gap) + (ellipse_ok ? "" : " < 0.05: the ellipse is an affine image of the disk");
  info = "puffed_triangle largest gap=" + Fmt("%.3g", SearchSpectrumGap(*MakePuffedTriangle(), 200, 4));
  return o;
}

// 5. φ: symmetric positive definite form, basis independence, compression symmetry.
Outcome PhiConstruction() {
  Outcome o;
  std::vector<Named> models = {{"quantum(2)", MakeQuantum(2)}, {"quantum(3)", MakeQuantum(3)}};
  for (int n = 1; n <= 5; ++n) models.push_back({"classical(" + std::to_string(n) + ")", MakeClassical(n)});
  for (int k = 2; k <= 4; ++k) models.push_back({"ball(" + std::to_string(k) + ")", MakeBall(k)});
  double sym = 0.0, dev = 0.0, asym = 0.0, ratio = std::numeric_limits<double>::infinity();
  std::vector<std::string> failed;
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    const std::uint64_t seed = DeriveSeed(5, mi);
    const PhiMap phi = BuildPhi(sys, SampleAtomicBasis(sys, seed));
    const InnerProductReport ip = CheckInnerProduct(phi);
    const BasisIndependenceReport bi = CheckBasisIndependence(sys, 5, seed);
    const std::vector<Matrix> filters = FiltersUnderPhi(phi, sys, 60, seed);
    const CompressionSymmetryReport cs = CheckCompressionSymmetry(phi, sys, filters, 1000, seed);
    sym = std::max(sym, ip.symmetry_error);
    dev = std::max(dev, bi.max_deviation);
    asym = std::max(asym, cs.max_asymmetry);
    ratio = std::min(ratio, ip.min_eigenvalue / ip.max_eigenvalue);
    const bool ok = ip.symmetry_error < 1e-10 && ip.min_eigenvalue > 1e-10 * ip.max_eigenvalue &&
                    bi.max_deviation < 1e-9 && cs.max_asymmetry < 1e-9 && cs.triples == 1000;
    if (!ok) failed.push_back(models[mi].name);
  }
  o.pass = failed.empty();
  o.detail = std::to_string(models.size()) + " models; symmetry=" + Fmt("%.2g", sym) + " min/max eig=" +
             Fmt("%.3g", ratio) + " basis dev=" + Fmt("%.2g", dev) + " compression asym=" + Fmt("%.2g", asym);
  for (const std::string& f : failed) o.detail += " FAILED:" + f;
  return o;
}

// 6. Perfection of classical and quantum cones; the square admits no positive symmetric form.
Outcome Perfection() {
  Outcome o;
  std::vector<Named> models;
  for (int n = 2; n <= 5; ++n) models.push_back({"classical(" + std::to_string(n) + ")", MakeClassical(n)});
  models.push_back({"quantum(2)", MakeQuantum(2)});
  models.push_back({"quantum(3)", MakeQuantum(3)});
  double worst = std::numeric_limits<double>::infinity();
  std::vector<std::string> failed;
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    const bool classical = models[mi].name.rfind("classical", 0) == 0;
    const PhiMap phi = BuildPhi(sys, SampleAtomicBasis(sys, DeriveSeed(6, mi)));
    const SelfDualityReport r = CheckPerfection(sys, phi, 200, DeriveSeed(6, mi));
    double margin = r.cone_margin;
    for (const FaceDualityReport& f : r.face_reports) margin = std::min(margin, f.margin);
    worst = std::min(worst, margin);
    if (!r.perfect || margin <= -1e-9 || (classical && !r.exact)) failed.push_back(models[mi].name);
  }
  const auto isos = ForcedOrderIsomorphisms(*MakeSquareBit());
  int symmetric = 0, negative = 0;
  double square_min = std::numeric_limits<double>::infinity();
  for (const OrderIsomorphism& iso : isos) {
    if (!iso.symmetric) continue;
    ++symmetric;
    negative += iso.min_eigenvalue < -1e-9;
    square_min = std::min(square_min, iso.min_eigenvalue);
  }
  const bool square_ok = symmetric > 0 && negative == symmetric;
  o.pass = failed.empty() && square_ok;
  o.detail = "worst self-duality margin=" + Fmt("%.3g", worst) + "; square: " + std::to_string(negative) + "/" +
             std::to_string(symmetric) + " symmetric order isomorphisms with a negative eigenvalue (min " +
             Fmt("%.3g", square_min) + ")";
  for (const std::string& f : failed) o.detail += " FAILED:" + f;
  return o;
}

// 7. Spectral expansion reconstruction, chain length and Riemann stabilization.
Outcome SpectralExpansionCriterion() {
  Outcome o;
  const std::vector<Named> models = {{"classical(4)", MakeClassical(4)}, {"quantum(2)", MakeQuantum(2)},
                                     {"quantum(3)", MakeQuantum(3)},     {"ball(3)", MakeBall(3)},
                                     {"ellipse(2,1)", MakeEllipse(2, 1)}};
  double worst_err = 0.0;
  int chain_failures = 0, riemann_failures = 0, riemann_runs = 0;
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    Rng rng(DeriveSeed(7, mi));
    for (int s = 0; s < 1000; ++s) {
      Vector a(sys.dim());
      for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = rng.Normal();
      const SpectralExpansion e = SpectralExpand(a, sys);
      Vector sum = Vector::Zero(sys.dim());
      const std::vector<ExpansionTerm> terms = AllTerms(e);
      for (const ExpansionTerm& t : terms) sum += t.coefficient * t.unit;
      worst_err = std::max(worst_err, (a - sum).norm());
      chain_failures += static_cast<int>(terms.size()) > sys.dim() + 1;
      if (s % 10 != 0) continue;
      const SpectralFamily family = MakeSpectralFamily(a, sys);
      double norm = 0.0;
      for (const ExpansionTerm& t : terms) norm = std::max(norm, std::abs(t.coefficient));
      std::vector<std::vector<double>> grids;
      const double base = std::isfinite(family.theta) ? family.theta : 1.0;
      for (double div : {2.0, 3.0, 7.0}) {
        const double mesh = base / div;
        grids.push_back(UniformGrid(-norm - mesh, norm + mesh, mesh));
      }
      const RiemannReport r = RiemannStabilizationDemo(a, sys, grids);
      ++riemann_runs;
      bool ok = r.stabilized;
      for (const GridResult& g : r.grids) ok = ok && g.finer_than_theta && g.matches_expansion;
      riemann_failures += !ok;
    }
  }
  o.pass = worst_err < 1e-10 && chain_failures == 0 && riemann_failures == 0;
  o.detail = "max reconstruction error=" + Fmt("%.3g", worst_err) + " chain failures=" +
             std::to_string(chain_failures) + " riemann failures=" + std::to_string(riemann_failures) + "/" +
             std::to_string(riemann_runs);
  return o;
}

// 8. The von Neumann ledger totals kT(S(ω) − S(σ)).
Outcome VonNeumannLedger() {
  Outcome o;
  const std::vector<Named> models = {{"classical(4)", MakeClassical(4)}, {"quantum(2)", MakeQuantum(2)},
                                     {"quantum(3)", MakeQuantum(3)},     {"ball(3)", MakeBall(3)},
                                     {"ellipse(2,1)", MakeEllipse(2, 1)}};
  const double temperature = 300.0;
  double worst_rel = 0.0, worst_sep = 0.0;
  int branch_mismatches = 0;
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    Rng rng(DeriveSeed(8, mi));
    for (int s = 0; s < 100; ++s) {
      const Vector omega = sys.SampleState(rng), sigma = sys.SampleState(rng);
      const WorkLedger l = RunVonNeumann(omega, sigma, sys, temperature);
      const double so = SpectralEntropy(StateVec{omega}, sys), ss = SpectralEntropy(StateVec{sigma}, sys);
      const double scale = l.k * temperature * (so + ss);
      if (scale > 0.0) {
        worst_rel = std::max(worst_rel, std::abs(l.ExpectedWork() - l.k * temperature * (so - ss)) / scale);
      }
      for (const LedgerStep& step : l.steps) {
        if (step.name != "compress" && step.name != "reverse_compress") continue;
        const double sign = step.name == "compress" ? 1.0 : -1.0;
        for (size_t i = 0; i < step.work.size(); ++i) {
          branch_mismatches += step.work[i] != sign * (-l.k * temperature * std::log(step.probability[i]));
        }
      }
      for (const Vector& x : {omega, sigma}) {
        worst_sep = std::max(worst_sep, BuildSeparationMap(SpectralFilters(x, sys), sys).norm_preservation_error);
      }
    }
  }
  o.pass = worst_rel <= 1e-12 && branch_mismatches == 0 && worst_sep <= 1e-12;
  o.detail = "max |W - kT dS| / kT(S(w)+S(s))=" + Fmt("%.3g", worst_rel) + " branch mismatches=" +
             std::to_string(branch_mismatches) + " separation u-error=" + Fmt("%.3g", worst_sep);
  return o;
}

// 9. Mixtures of reversible images are majorized by the input.
Outcome GroupAverage() {
  Outcome o;
  const std::vector<Named> models = {{"classical(4)", MakeClassical(4)}, {"quantum(2)", MakeQuantum(2)},
                                     {"quantum(3)", MakeQuantum(3)},     {"ball(3)", MakeBall(3)},
                                     {"ellipse(2,1)", MakeEllipse(2, 1)}};
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (size_t mi = 0; mi < models.size(); ++mi) {
    const SystemModel& sys = *models[mi].model;
    Rng rng(DeriveSeed(9, mi));
    for (int s = 0; s < 100; ++s) {
      const int n = rng.UniformInt(1, 20);
      std::vector<double> weights(n);
      double total = 0.0;
      for (double& w : weights) total += (w = rng.Uniform(0.05, 1.0));
      for (double& w : weights) w /= total;
      const GroupAverageReport r =
          GroupAverageMajorization(sys, StateVec{sys.SampleState(rng)}, n, weights, DeriveSeed(9000 + mi, s));
      worst = std::min(worst, r.margin);
      violations += !r.majorized || r.margin < -1e-10;
    }
  }
  o.pass = violations == 0;
  o.detail = "violations=" + std::to_string(violations) + " worst margin=" + Fmt("%.3g", worst);
  return o;
}

// 10. Two runs of each CLI command with the same seed give identical reports.
Outcome Reproducibility() {
  Outcome o;
  const std::filesystem::path dir = std::filesystem::temp_directory_path();
  const std::string polytope = (dir / "gpt_spectra_acceptance_square.json").string();
  std::ofstream(polytope) << R"({"points": [[1, 1], [1, -1], [-1, -1], [-1, 1]]})";
  const std::vector<std::vector<std::string>> commands = {
      {"model", "--model", "ball", "--k", "3"},
      {"axioms", "--model", "quantum", "--d", "2", "--samples", "10"},
      {"entropy", "--model", "quantum", "--d", "3", "--budget", "50"},
      {"majorize", "--model", "ellipse", "--a", "2", "--b", "1", "--trials", "30"},
      {"expand", "--model", "quantum", "--d", "2"},
      {"perfection", "--model", "classical", "--n", "3", "--samples", "100"},
      {"vonneumann", "--model", "ball", "--k", "3"},
      {"polytope", "analyze", polytope},
  };
  int differing = 0, errors = 0;
  for (std::vector<std::string> args : commands) {
    args.push_back("--seed");
    args.push_back("42");
    std::ostringstream a, b, ea, eb;
    const int ca = RunCli(args, a, ea), cb = RunCli(args, b, eb);
    errors += ca == kExitConfig || cb == kExitConfig;
    differing += ca != cb || a.str() != b.str() || a.str().empty();
  }
  std::filesystem::remove(polytope);
  o.pass = differing == 0 && errors == 0;
  o.detail = std::to_string(commands.size()) + " commands; differing=" + std::to_string(differing) +
             " errors=" + std::to_string(errors);
  return o;
}

}  // namespace
}  // namespace gpt_spectra

int main() {
  using gpt_spectra::Outcome;
  std::string info4;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"majorization of fine-grained outcomes", gpt_spectra::MajorizationTheorem},
      {"doubly substochastic characterization", gpt_spectra::DoublySubstochastic},
      {"measurement entropy equals spectral entropy", gpt_spectra::EntropyEquality},
      {"axiom S counterexamples", [&] { return gpt_spectra::AxiomSCounterexamples(info4); }},
      {"phi construction", gpt_spectra::PhiConstruction},
      {"perfection", gpt_spectra::Perfection},
      {"spectral expansion", gpt_spectra::SpectralExpansionCriterion},
      {"von Neumann ledger", gpt_spectra::VonNeumannLedger},
      {"group average", gpt_spectra::GroupAverage},
      {"reproducibility", gpt_spectra::Reproducibility},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu %s: %s (%s) [%.1fs]\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    if (i == 3 && !info4.empty()) std::printf("  info: %s\n", info4.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
