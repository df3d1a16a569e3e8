#include "gpt_spectra/projective.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpt_spectra/core.h"
#include "gpt_spectra/linalg.h"
#include "gpt_spectra/parallel.h"

namespace gpt_spectra {
namespace {

constexpr int kPositivityNet = 256;

double MaxAbs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Normalized extreme rays for polyhedral cones, a pure-state net otherwise.
std::vector<Vector> TestStates(const SystemModel& sys, bool* exact) {
  std::vector<Vector> out;
  if (const auto cone = sys.ExactCone()) {
    for (const Vector& r : cone->rays) out.push_back(r / sys.unit().dot(r));
    *exact = true;
  } else {
    out = sys.PureNet(kPositivityNet);
    *exact = false;
  }
  return out;
}

// Worst ‖Px − x‖ over the given extreme points with u(Px) = u(x), and at the
// minimizer of the complementary unit when that minimum is zero.
double NeutralityError(const Matrix& p, const Matrix& q, const std::vector<Vector>& states,
                       const SystemModel& sys, double tol) {
  const Vector& u = sys.unit();
  double worst = 0.0;
  for (const Vector& x : states) {
    if (u.dot(p * x) >= u.dot(x) - tol) worst = std::max(worst, (p * x - x).cwiseAbs().maxCoeff());
  }
  const EffectRange r = sys.RangeOverStates(q.transpose() * u);
  if (std::abs(r.min) <= tol) {
    worst = std::max(worst, (p * r.argmin - r.argmin).cwiseAbs().maxCoeff());
  }
  return worst;
}

Vector UnitOfFace(const Face& f, const SystemModel& sys, const Matrix* ip) {
  return sys.FiltersFor(f, ip).map.transpose() * sys.unit();
}

Vector Normalized(const Vector& x, const SystemModel& sys) { return x / sys.unit().dot(x); }

}  // namespace

FilterCertificate CertifyFilter(const FilterMaps& maps, const Face& face, const SystemModel& sys,
                                double tol) {
  const Matrix& p = maps.map;
  const Matrix& q = maps.complement;
  const Vector& u = sys.unit();
  FilterCertificate c;
  c.idempotence_error = std::max(MaxAbs(p * p - p), MaxAbs(q * q - q));
  c.orthogonality_error = std::max(MaxAbs(p * q), MaxAbs(q * p));

  const PositivityCertificate pp = CertifyPositive(p, sys, kPositivityNet);
  const PositivityCertificate pq = CertifyPositive(q, sys, kPositivityNet);
  c.positivity_margin = std::min(pp.worst_margin, pq.worst_margin);

  c.normalization_margin = std::min(sys.RangeOverStates(u - p.transpose() * u).min,
                                    sys.RangeOverStates(u - q.transpose() * u).min);
  c.unit_sum_error = (p.transpose() * u + q.transpose() * u - u).cwiseAbs().maxCoeff();

  // A net point close to the face has u(Px) − u(x) of second order but Px − x
  // of first order, so only exact extreme points enter the first test.
  std::vector<Vector> states = TestStates(sys, &c.exact);
  if (!c.exact) states.clear();
  c.neutrality_error = std::max(NeutralityError(p, q, states, sys, tol),
                                NeutralityError(q, p, states, sys, tol));

  c.face_error = face.empty() ? MaxAbs(p) : MaxAbs(p * face.basis - face.basis);
  if (NumericalRank(p, 1e-8) != face.rank()) c.face_error = std::max(c.face_error, 1.0);

  if (c.idempotence_error > tol) {
    c.failure = "map is not idempotent";
  } else if (c.orthogonality_error > tol) {
    c.failure = "map and complement do not annihilate each other";
  } else if (c.positivity_margin < -tol) {
    c.failure = "map or complement is not positive";
  } else if (c.normalization_margin < -tol) {
    c.failure = "map or complement increases the order unit";
  } else if (c.unit_sum_error > tol) {
    c.failure = "projective units of map and complement do not sum to u";
  } else if (c.neutrality_error > tol) {
    c.failure = "a state passing with certainty is disturbed";
  } else if (c.face_error > tol) {
    c.failure = "image of the map is not the face";
  }
  return c;
}

Filter BuildFilter(const Face& face, const SystemModel& sys, const Matrix* inner_product) {
  const FilterMaps maps = sys.FiltersFor(face, inner_product);
  Filter f;
  f.certificate = CertifyFilter(maps, face, sys);
  if (!f.certificate.failure.empty()) {
    throw Error(ErrorCode::kNotProjective,
                "no filter for the face of rank " + std::to_string(face.rank()) + ": " +
                    f.certificate.failure);
  }
  f.map = LinearMapA{maps.map, true, false};
  f.complement = LinearMapA{maps.complement, true, false};
  f.face = face;
  f.unit_effect = EffectVec{maps.map.transpose() * sys.unit()};
  return f;
}

NeutralityReport NeutralityCheck(const Filter& filter, const SystemModel& sys, int samples,
                                 std::uint64_t seed) {
  const Matrix& p = filter.map.matrix;
  const Vector& u = sys.unit();
  NeutralityReport r;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Vector x = sys.SampleState(rng);
    if (i % 2 == 0) {
      const Vector y = p * x;
      if (u.dot(y) <= 1e-12) {
        ++r.vacuous;
        ++r.samples;
        continue;
      }
      x = y / u.dot(y);
    }
    ++r.samples;
    if (u.dot(p * x) < u.dot(x) - 1e-12) {
      ++r.vacuous;
      continue;
    }
    const double err = (p * x - x).cwiseAbs().maxCoeff();
    r.max_error = std::max(r.max_error, err);
    if (err > 1e-10) ++r.violations;
  }
  return r;
}

Vector HatOf(const Vector& atom, const SystemModel& sys) {
  sys.CheckDim(atom, "effect");
  const auto split = sys.SplitAtomic(atom);
  if (!split || std::abs(split->scale - 1.0) > 1e-9) {
    throw Error(ErrorCode::kNotAtomic, "effect is not a maximal effect on an extreme ray");
  }
  const Vector hat = sys.Hat(atom);
  if (std::abs(atom.dot(hat) - 1.0) > 1e-10 || (sys.Tilde(hat) - atom).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::kNotAtomic, "hat and tilde are not mutually inverse on the effect");
  }
  return hat;
}

Vector TildeOf(const Vector& pure, const SystemModel& sys) {
  sys.CheckDim(pure, "state");
  if (!sys.IsPure(pure)) throw Error(ErrorCode::kNotPure, "state is not pure");
  const Vector tilde = sys.Tilde(pure);
  if (std::abs(tilde.dot(pure) - 1.0) > 1e-10 || (sys.Hat(tilde) - pure).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::kNotProjective, "hat and tilde are not mutually inverse on the state");
  }
  return tilde;
}

double TransitionProbability(const Vector& sigma, const Vector& omega, const SystemModel& sys) {
  if (!sys.IsPure(sigma)) throw Error(ErrorCode::kNotPure, "first state is not pure");
  return Evaluate(EffectVec{TildeOf(omega, sys)}, StateVec{sigma});
}

StpReport CheckSTP(const SystemModel& sys, int n_pairs, std::uint64_t seed, double tol) {
  StpReport r;
  std::vector<std::pair<Vector, Vector>> pairs;
  if (const auto cone = sys.ExactCone()) {
    r.exact = true;
    std::vector<Vector> v;
    for (const Vector& ray : cone->rays) v.push_back(Normalized(ray, sys));
    for (size_t i = 0; i < v.size(); ++i) {
      for (size_t j = i + 1; j < v.size(); ++j) pairs.emplace_back(v[i], v[j]);
    }
  } else {
    for (int i = 0; i < n_pairs; ++i) {
      Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
      Vector a = sys.SamplePure(rng);
      Vector b = sys.SamplePure(rng);
      pairs.emplace_back(std::move(a), std::move(b));
    }
  }
  std::vector<double> asym(pairs.size(), 0.0);
  try {
    ParallelFor(static_cast<int>(pairs.size()), [&](int i) {
      const auto& [a, b] = pairs[i];
      asym[i] = std::abs(TransitionProbability(a, b, sys) - TransitionProbability(b, a, sys));
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotProjective && e.code() != ErrorCode::kNotAtomic) throw;
    r.holds = false;
    r.diagnostic = e.what();
    return r;
  }
  r.pairs_checked = static_cast<int>(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (asym[i] > r.max_asymmetry) {
      r.max_asymmetry = asym[i];
      if (asym[i] > tol) r.witness = pairs[i];
    }
  }
  r.holds = !r.witness.has_value();
  return r;
}

ProjectivityReport CheckProjectivity(const SystemModel& sys, int cap, std::uint64_t seed,
                                     const Matrix* inner_product) {
  ProjectivityReport r;
  const std::vector<Face> faces = sys.EnumerateFaces(cap, seed, &r.exhaustive);
  std::vector<std::string> failure(faces.size());
  ParallelFor(static_cast<int>(faces.size()), [&](int i) {
    try {
      BuildFilter(faces[i], sys, inner_product);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotProjective) throw;
      failure[i] = e.what();
    }
  });
  r.faces_checked = static_cast<int>(faces.size());
  for (size_t i = 0; i < faces.size(); ++i) {
    if (failure[i].empty()) continue;
    ++r.failures;
    if (!r.witness) {
      r.witness = faces[i];
      r.diagnostic = failure[i];
    }
  }
  r.holds = r.failures == 0;
  return r;
}

bool FaceLeq(const Face& f, const Face& g) {
  if (f.empty()) return true;
  if (g.empty()) return false;
  return SubspaceContains(g.basis, f.basis);
}

bool SameFace(const Face& f, const Face& g) {
  return f.rank() == g.rank() && FaceLeq(f, g) && FaceLeq(g, f);
}

Face FaceJoin(const Face& f, const Face& g, const SystemModel& sys) {
  if (f.empty()) return g;
  if (g.empty()) return f;
  return sys.FaceOf(sys.RelativeInteriorPoint(f.basis) + sys.RelativeInteriorPoint(g.basis));
}

Face FaceMeet(const Face& f, const Face& g, const SystemModel& sys) {
  if (f.empty() || g.empty()) return Face{Matrix(sys.dim(), 0)};
  const Matrix common = IntersectSubspaces(f.basis, g.basis);
  if (common.cols() == 0) return Face{Matrix(sys.dim(), 0)};
  return sys.FaceFromSubspace(common);
}

Face FaceComplement(const Face& f, const SystemModel& sys, const Matrix* inner_product) {
  const Matrix image = OrthonormalBasis(sys.FiltersFor(f, inner_product).complement, 1e-8);
  if (image.cols() == 0) return Face{Matrix(sys.dim(), 0)};
  return sys.FaceFromSubspace(image);
}

LemmaReport CheckLemmaDistinguishability(const SystemModel& sys, int n_pairs, std::uint64_t seed,
                                         const Matrix* inner_product) {
  bool exhaustive = false;
  std::vector<Face> proper;
  for (Face& f : sys.EnumerateFaces(64, seed, &exhaustive)) {
    if (!f.empty() && f.rank() < sys.dim()) proper.push_back(std::move(f));
  }
  const Vector& u = sys.unit();
  std::vector<std::pair<Vector, Vector>> pairs(std::max(0, n_pairs));
  std::vector<int> lp(pairs.size()), face_test(pairs.size());
  ParallelFor(n_pairs, [&](int i) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(i)));
    Vector omega, sigma;
    const int kind = proper.empty() ? 2 : i % 3;
    if (kind < 2) {
      const Face& f = proper[rng.UniformInt(0, static_cast<int>(proper.size()) - 1)];
      const FilterMaps maps = sys.FiltersFor(f, inner_product);
      omega = maps.map * sys.SampleState(rng);
      sigma = maps.complement * sys.SampleState(rng);
      if (kind == 1) sigma += 0.25 * sys.SampleState(rng);
    }
    // Filters of non-projective models can map states out of the cone; such
    // pairs are replaced by random pure pairs.
    if (kind == 2 || u.dot(omega) <= 1e-9 || u.dot(sigma) <= 1e-9 ||
        sys.ConeMargin(omega) < -1e-10 || sys.ConeMargin(sigma) < -1e-10) {
      omega = sys.SamplePure(rng);
      sigma = sys.SamplePure(rng);
    }
    omega = Normalized(omega, sys);
    sigma = Normalized(sigma, sys);
    lp[i] = PerfectlyDistinguishable({omega, sigma}, sys).has_value();
    face_test[i] = FaceLeq(sys.FaceOf(omega),
                           FaceComplement(sys.FaceOf(sigma), sys, inner_product));
    pairs[i] = {std::move(omega), std::move(sigma)};
  });
  LemmaReport r;
  r.pairs_checked = n_pairs;
  for (size_t i = 0; i < pairs.size(); ++i) {
    r.distinguishable_pairs += lp[i];
    if (lp[i] != face_test[i]) {
      ++r.disagreements;
      if (!r.witness) r.witness = pairs[i];
    }
  }
  r.holds = r.disagreements == 0;
  return r;
}

OrthomodularReport CheckOrthomodularIdentities(const SystemModel& sys, int cap,
                                               std::uint64_t seed, int max_pairs,
                                               const Matrix* inner_product) {
  OrthomodularReport r;
  const std::vector<Face> faces = sys.EnumerateFaces(cap, seed, &r.exhaustive);
  const int n = static_cast<int>(faces.size());
  std::vector<Face> comps(n);
  std::vector<int> involution_ok(n);
  ParallelFor(n, [&](int i) {
    comps[i] = FaceComplement(faces[i], sys, inner_product);
    involution_ok[i] = SameFace(FaceComplement(comps[i], sys, inner_product), faces[i]);
  });
  r.faces_checked = n;
  for (int i = 0; i < n; ++i) r.involution_failures += involution_ok[i] ? 0 : 1;

  // Index pairs: all when affordable, else a seeded sample.
  std::vector<std::pair<int, int>> pairs;
  const long long all = static_cast<long long>(n) * (n - 1) / 2;
  if (all <= max_pairs) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
  } else {
    Rng rng(DeriveSeed(seed, 1));
    while (static_cast<int>(pairs.size()) < max_pairs) {
      const int i = rng.UniformInt(0, n - 1), j = rng.UniformInt(0, n - 1);
      if (i != j) pairs.emplace_back(i, j);
    }
  }

  struct PairResult {
    bool de_morgan = true;
    bool orthomodular = true;
    bool additivity = true;
    double additivity_error = 0.0;
  };
  auto orthomodular_holds = [&](const Face& f, const Face& g) {
    const Face rest = FaceMeet(g, FaceComplement(f, sys, inner_product), sys);
    return SameFace(g, FaceJoin(f, rest, sys));
  };
  auto additivity_error = [&](const Face& f, const Face& g) {
    const Vector lhs = UnitOfFace(FaceJoin(f, g, sys), sys, inner_product);
    const Vector rhs = UnitOfFace(f, sys, inner_product) + UnitOfFace(g, sys, inner_product);
    return (lhs - rhs).cwiseAbs().maxCoeff();
  };

  const int n_pairs = static_cast<int>(pairs.size());
  std::vector<PairResult> results(n_pairs + n);
  ParallelFor(n_pairs + n, [&](int t) {
    PairResult& res = results[t];
    if (t < n_pairs) {
      const auto [i, j] = pairs[t];
      const Face& f = faces[i];
      const Face& g = faces[j];
      const Face lhs = FaceComplement(FaceJoin(f, g, sys), sys, inner_product);
      res.de_morgan = SameFace(lhs, FaceMeet(comps[i], comps[j], sys));
      if (FaceLeq(f, g)) res.orthomodular = orthomodular_holds(f, g);
      if (FaceLeq(g, f)) res.orthomodular = res.orthomodular && orthomodular_holds(g, f);
      if (FaceLeq(f, comps[j])) res.additivity_error = additivity_error(f, g);
      return;
    }
    // Constructed comparable and orthogonal pairs around face t - n_pairs.
    const int i = t - n_pairs;
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(t) + 2));
    const Face& f = faces[i];
    const Face g = FaceJoin(f, faces[rng.UniformInt(0, n - 1)], sys);
    res.orthomodular = orthomodular_holds(f, g);
    const Vector inside = sys.FiltersFor(f, inner_product).complement * sys.SamplePure(rng);
    const Face k = sys.unit().dot(inside) > 1e-9 ? sys.FaceOf(inside) : comps[i];
    res.additivity_error = additivity_error(f, k);
  });
  r.pairs_checked = n_pairs + n;
  for (PairResult& res : results) {
    res.additivity = res.additivity_error <= 1e-10;
    r.de_morgan_failures += res.de_morgan ? 0 : 1;
    r.orthomodular_failures += res.orthomodular ? 0 : 1;
    r.additivity_failures += res.additivity ? 0 : 1;
    r.max_additivity_error = std::max(r.max_additivity_error, res.additivity_error);
  }
  r.holds = r.involution_failures == 0 && r.de_morgan_failures == 0 &&
            r.orthomodular_failures == 0 && r.additivity_failures == 0;
  return r;
}

EffectIntervalReport CheckAtomsAgainstEffectInterval(const SystemModel& sys) {
  const auto cone = sys.ExactCone();
  if (!cone) throw Error(ErrorCode::kModelUnsupported, "effect interval needs exact cone data");
  const int d = sys.dim();
  std::vector<Vector> rays;
  for (const Vector& ray : cone->rays) rays.push_back(Normalized(ray, sys));
  const int m = static_cast<int>(rays.size());
  // Constraints r·e >= 0 (rows 0..m-1) and r·e <= 1 (rows m..2m-1).
  const int rows = 2 * m;
  double combos = 1.0;
  for (int k = 0; k < d; ++k) combos = combos * (rows - k) / (k + 1);
  if (combos > 2e6) {
    throw Error(ErrorCode::kEnumerationBudgetExceeded, "effect interval has too many constraint subsets");
  }

  std::vector<Vector> vertices;
  std::vector<int> pick(d);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Matrix a(d, d);
    Vector b(d);
    for (int k = 0; k < d; ++k) {
      a.row(k) = rays[pick[k] % m].transpose();
      b(k) = pick[k] >= m ? 1.0 : 0.0;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (lu.rank() == d) {
      const Vector e = lu.solve(b);
      bool feasible = true;
      for (const Vector& r : rays) {
        const double v = r.dot(e);
        if (v < -1e-9 || v > 1.0 + 1e-9) feasible = false;
      }
      const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const Vector& w) {
        return (w - e).cwiseAbs().maxCoeff() <= 1e-9;
      });
      if (feasible && !seen) vertices.push_back(e);
    }
    int k = d - 1;
    while (k >= 0 && pick[k] == rows - d + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int l = k + 1; l < d; ++l) pick[l] = pick[l - 1] + 1;
  }

  std::vector<Vector> atoms;
  for (const Vector& normal : cone->facet_normals) {
    double top = 0.0;
    for (const Vector& r : rays) top = std::max(top, normal.dot(r));
    atoms.push_back(normal / top);
  }
  auto on_extreme_ray = [&](const Vector& e) {
    if (e.norm() <= 1e-9) return false;
    return std::any_of(atoms.begin(), atoms.end(), [&](const Vector& a) {
      return std::abs(std::abs(a.normalized().dot(e.normalized())) - 1.0) <= 1e-10;
    });
  };
  auto is_vertex = [&](const Vector& a) {
    return std::any_of(vertices.begin(), vertices.end(), [&](const Vector& w) {
      return (w - a).cwiseAbs().maxCoeff() <= 1e-9;
    });
  };

  EffectIntervalReport r;
  r.interval_vertices = static_cast<int>(vertices.size());
  r.model_atoms = static_cast<int>(atoms.size());
  for (const Vector& v : vertices) r.extremal_atoms += on_extreme_ray(v) ? 1 : 0;
  r.match = r.extremal_atoms == r.model_atoms && std::all_of(atoms.begin(), atoms.end(), is_vertex);
  return r;
}

}  // namespace gpt_spectra
