#include "gpt_spectra/perfection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gpt_spectra/linalg.h"
#include "gpt_spectra/parallel.h"
#include "gpt_spectra/polytope.h"
#include "gpt_spectra/projective.h"

namespace gpt_spectra {
namespace {

constexpr int kSmoothNet = 128;
constexpr int kFaceSamples = 24;

void RequireStateForm(const PhiMap& phi) {
  if (phi.state_form.size() == 0) {
    throw Error(ErrorCode::kSingularInnerProduct, "phi is singular, so there is no form on A");
  }
}

Matrix Symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double NormalizedPairing(const Vector& x, const Matrix& g, const Vector& y) {
  const double scale = std::max(x.norm() * (g * y).norm(), 1e-300);
  return x.dot(g * y) / scale;
}

// Rays of the polyhedral cone lying in span(basis).
std::vector<Vector> RaysInSpan(const std::vector<Vector>& rays, const Matrix& basis) {
  std::vector<Vector> out;
  for (const Vector& r : rays) {
    if (SubspaceContains(basis, r.normalized())) out.push_back(r);
  }
  return out;
}

// Exact self-duality of cone(rays) ⊂ span(basis) with the form restricted to
// the span. Returns the signed margin: the smallest normalized pairing of two
// rays and the smallest cone margin of an internal dual ray.
FaceDualityReport ExactFaceDuality(const std::vector<Vector>& rays, const Matrix& basis,
                                   const Matrix& g, const SystemModel& sys, double tol) {
  FaceDualityReport r;
  r.rank = static_cast<int>(basis.cols());
  const Matrix gf = basis.transpose() * g * basis;
  std::vector<Vector> local;
  for (const Vector& ray : rays) local.push_back(basis.transpose() * ray);
  r.margin = std::numeric_limits<double>::infinity();
  for (const Vector& a : local) {
    for (const Vector& b : local) r.margin = std::min(r.margin, NormalizedPairing(a, gf, b));
  }
  if (r.rank == 1) {
    r.self_dual = gf(0, 0) > 0.0 && r.margin >= -tol;
    return r;
  }
  const std::vector<Vector> dual = DualCone(local, gf);
  for (const Vector& y : dual) r.margin = std::min(r.margin, sys.ConeMargin(basis * y));
  r.self_dual = SameRaySet(dual, local) && r.margin >= -tol;
  return r;
}

// Sampled self-duality of a face given by its filter: pairings between pure
// states of the face, and cone membership of internal dual generators.
FaceDualityReport SampledFaceDuality(const Face& face, const Matrix& p, const Matrix& g,
                                     const SystemModel& sys, std::uint64_t seed, double tol) {
  FaceDualityReport r;
  r.rank = face.rank();
  const Matrix& b = face.basis;
  const Matrix gf = b.transpose() * g * b;
  Rng rng(seed);
  std::vector<Vector> pure;
  for (int k = 0; k < kFaceSamples; ++k) {
    const Vector x = p * sys.SamplePure(rng);
    if (sys.unit().dot(x) > 1e-9) pure.push_back(x / sys.unit().dot(x));
  }
  r.margin = std::numeric_limits<double>::infinity();
  for (const Vector& x : pure) {
    for (const Vector& y : pure) r.margin = std::min(r.margin, NormalizedPairing(x, g, y));
  }
  const Eigen::LDLT<Matrix> solve(gf);
  for (int k = 0; k < kFaceSamples; ++k) {
    const Vector y = b * solve.solve(b.transpose() * sys.SampleAtom(rng));
    r.margin = std::min(r.margin, sys.ConeMargin(y));
  }
  if (!std::isfinite(r.margin)) r.margin = 0.0;
  r.self_dual = r.margin >= -tol;
  return r;
}

}  // namespace

PhiMap BuildPhi(const SystemModel& sys, const std::vector<Vector>& atomic_basis) {
  const int d = sys.dim();
  if (static_cast<int>(atomic_basis.size()) != d) {
    throw Error(ErrorCode::kNotABasis, "basis must have dim(A) elements");
  }
  for (size_t i = 0; i < atomic_basis.size(); ++i) {
    sys.CheckDim(atomic_basis[i], "atom");
    const auto split = sys.SplitAtomic(atomic_basis[i]);
    if (!split || std::abs(split->scale - 1.0) > 1e-9) {
      throw Error(ErrorCode::kNotAtomic, "basis element " + std::to_string(i) + " is not atomic");
    }
  }
  const Matrix w = StackColumns(atomic_basis, d);
  if (NumericalRank(w, 1e-9) < d) throw Error(ErrorCode::kNotABasis, "atoms are linearly dependent");
  Matrix h(d, d);
  for (int i = 0; i < d; ++i) h.col(i) = sys.Hat(atomic_basis[i]);
  PhiMap phi;
  phi.basis_atoms = atomic_basis;
  phi.matrix = w.transpose().partialPivLu().solve(h.transpose()).transpose();
  phi.gram = phi.matrix;
  const Eigen::FullPivLU<Matrix> lu(phi.matrix);
  if (lu.isInvertible()) phi.state_form = Symmetrized(lu.inverse());
  return phi;
}

std::vector<Vector> SampleAtomicBasis(const SystemModel& sys, std::uint64_t seed) {
  const int d = sys.dim();
  Rng rng(seed);
  std::vector<Vector> basis;
  for (int attempt = 0; attempt < 200 * d && static_cast<int>(basis.size()) < d; ++attempt) {
    Vector a = sys.SampleAtom(rng);
    basis.push_back(a);
    if (NumericalRank(StackColumns(basis, d), 1e-8) < static_cast<int>(basis.size())) {
      basis.pop_back();
    }
  }
  if (static_cast<int>(basis.size()) < d) {
    throw Error(ErrorCode::kNotABasis, "sampled atoms do not span the dual space");
  }
  return basis;
}

BasisIndependenceReport CheckBasisIndependence(const SystemModel& sys, int n_bases,
                                               std::uint64_t seed, double tol) {
  BasisIndependenceReport r;
  std::vector<PhiMap> maps;
  try {
    for (int k = 0; k < n_bases; ++k) {
      maps.push_back(BuildPhi(sys, SampleAtomicBasis(sys, DeriveSeed(seed, k))));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotProjective && e.code() != ErrorCode::kNotAtomic) throw;
    r.holds = false;
    r.diagnostic = e.what();
    return r;
  }
  r.bases = n_bases;
  for (size_t k = 1; k < maps.size(); ++k) {
    r.max_deviation =
        std::max(r.max_deviation, (maps[k].matrix - maps[0].matrix).cwiseAbs().maxCoeff());
  }
  if (!maps.empty()) {
    Rng rng(DeriveSeed(seed, 1u << 20));
    r.min_image_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
      const Vector x = sys.SampleAtom(rng);
      const Vector image = maps[0].matrix * x;
      r.max_fresh_error = std::max(r.max_fresh_error, (image - sys.Hat(x)).cwiseAbs().maxCoeff());
      r.min_image_margin = std::min(r.min_image_margin, sys.ConeMargin(image));
    }
  }
  r.holds = r.max_deviation < tol && r.max_fresh_error < tol;
  return r;
}

InnerProductReport CheckInnerProduct(const Matrix& gram) {
  InnerProductReport r;
  r.symmetry_error = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  r.symmetric = r.symmetry_error < 1e-10;
  const Vector ev = SymmetricEigenvalues(gram);
  r.min_eigenvalue = ev.minCoeff();
  r.max_eigenvalue = ev.maxCoeff();
  r.positive_definite = r.min_eigenvalue > 1e-10 * std::max(r.max_eigenvalue, 0.0);
  return r;
}

InnerProductReport CheckInnerProduct(const PhiMap& phi) { return CheckInnerProduct(phi.gram); }

std::vector<Matrix> FiltersUnderPhi(const PhiMap& phi, const SystemModel& sys, int cap,
                                    std::uint64_t seed) {
  RequireStateForm(phi);
  bool exhaustive = false;
  std::vector<Matrix> out;
  for (const Face& f : sys.EnumerateFaces(cap, seed, &exhaustive)) {
    const FilterMaps maps = sys.FiltersFor(f, &phi.state_form);
    out.push_back(maps.map);
    out.push_back(maps.complement);
  }
  return out;
}

CompressionSymmetryReport CheckCompressionSymmetry(const PhiMap& phi, const SystemModel& sys,
                                                   const std::vector<Matrix>& filters,
                                                   int samples, std::uint64_t seed, double tol) {
  RequireStateForm(phi);
  CompressionSymmetryReport r;
  r.filters = static_cast<int>(filters.size());
  if (filters.empty()) return r;
  const Matrix& g = phi.state_form;
  Rng rng(seed);
  for (int t = 0; t < samples; ++t) {
    const Matrix& p = filters[t % filters.size()];
    const Vector a = sys.SampleState(rng);
    const Vector b = sys.SampleState(rng);
    r.max_asymmetry = std::max(r.max_asymmetry, std::abs((p * a).dot(g * b) - a.dot(g * (p * b))));
    ++r.triples;
  }
  for (const Matrix& p : filters) {
    for (int k = 0; k < 4; ++k) {
      const Vector y = p.transpose() * sys.SampleAtom(rng);
      if (y.norm() <= 1e-9) continue;
      const auto split = sys.SplitAtomic(y);
      if (!split) continue;
      const Vector image = phi.matrix * split->atom;
      r.max_face_atom_error = std::max(r.max_face_atom_error, (p * image - image).cwiseAbs().maxCoeff());
      ++r.face_atoms_checked;
    }
  }
  r.holds = r.max_asymmetry < tol && r.max_face_atom_error < tol;
  return r;
}

SelfDualityReport CheckPerfection(const SystemModel& sys, const PhiMap& phi, int cap,
                                  std::uint64_t seed, double tol) {
  SelfDualityReport r;
  const InnerProductReport ip = CheckInnerProduct(phi);
  r.gram_min_eigenvalue = ip.min_eigenvalue;
  r.positive_definite = ip.positive_definite;
  if (!ip.symmetric || !ip.positive_definite) {
    r.note = "form is not a symmetric positive definite inner product; self-duality not evaluated";
    return r;
  }
  const Matrix& g = phi.state_form;
  const int d = sys.dim();
  if (g.size() == 0) {
    r.note = "phi is singular; self-duality not evaluated";
    return r;
  }
  const std::vector<Face> faces = sys.EnumerateFaces(cap, seed, &r.faces_exhaustive);
  std::vector<FaceDualityReport> face_reports(faces.size());

  if (const auto cone = sys.ExactCone()) {
    r.exact = true;
    const FaceDualityReport whole = ExactFaceDuality(cone->rays, Matrix::Identity(d, d), g, sys, tol);
    r.cone_self_dual = whole.self_dual;
    r.cone_margin = whole.margin;
    ParallelFor(static_cast<int>(faces.size()), [&](int i) {
      const Face& f = faces[i];
      if (f.empty() || f.rank() == d) {
        face_reports[i] = {f.rank(), f.empty() || whole.self_dual, f.empty() ? 0.0 : whole.margin};
        return;
      }
      face_reports[i] = ExactFaceDuality(RaysInSpan(cone->rays, f.basis), f.basis, g, sys, tol);
    });
  } else {
    // K ⊆ K^G through the exact minimum of each functional Gx over Ω, and
    // K^G ⊆ K through dual generators G⁻¹a, which should sit on the boundary.
    double margin = std::numeric_limits<double>::infinity();
    for (const Vector& x : sys.PureNet(kSmoothNet)) {
      const Vector gx = g * x;
      margin = std::min(margin, sys.RangeOverStates(gx).min / gx.norm());
    }
    const Eigen::LDLT<Matrix> solve(g);
    Rng rng(seed);
    for (int k = 0; k < kSmoothNet; ++k) {
      const double m = sys.ConeMargin(solve.solve(sys.SampleAtom(rng)));
      margin = std::min({margin, m, -std::abs(m)});
    }
    r.cone_margin = margin;
    r.cone_self_dual = margin >= -tol;
    ParallelFor(static_cast<int>(faces.size()), [&](int i) {
      const Face& f = faces[i];
      if (f.empty() || f.rank() == d) {
        face_reports[i] = {f.rank(), f.empty() || r.cone_self_dual, f.empty() ? 0.0 : margin};
        return;
      }
      if (f.rank() == 1) {
        const Vector x = f.basis.col(0);
        face_reports[i] = {1, x.dot(g * x) > 0.0, 1.0};
        return;
      }
      face_reports[i] = SampledFaceDuality(f, sys.FiltersFor(f, &g).map, g, sys,
                                           DeriveSeed(seed, static_cast<std::uint64_t>(i)), tol);
    });
  }
  r.face_reports = std::move(face_reports);
  r.perfect = r.cone_self_dual &&
              std::all_of(r.face_reports.begin(), r.face_reports.end(),
                          [](const FaceDualityReport& f) { return f.self_dual; });
  return r;
}

OrthotracialReport OrthotracialSubspace(const SystemModel& sys, const PhiMap& phi, int cap,
                                        std::uint64_t seed) {
  RequireStateForm(phi);
  OrthotracialReport r;
  const int d = sys.dim();
  const Matrix& g = phi.state_form;
  const std::vector<Face> faces = sys.EnumerateFaces(cap, seed, &r.exhaustive);
  std::vector<Matrix> blocks(faces.size());
  ParallelFor(static_cast<int>(faces.size()), [&](int i) {
    const Face& f = faces[i];
    if (f.empty() || f.rank() == d) {
      blocks[i] = Matrix::Zero(0, d);
      return;
    }
    const Face comp = FaceComplement(f, sys, &g);
    Matrix sum = FormOrthogonalProjector(f.basis, g) - Matrix::Identity(d, d);
    if (!comp.empty()) sum += FormOrthogonalProjector(comp.basis, g);
    blocks[i] = sum;
  });
  int rows = 0;
  for (const Matrix& b : blocks) {
    rows += static_cast<int>(b.rows());
    r.faces_used += b.rows() > 0 ? 1 : 0;
  }
  Matrix stacked(rows, d);
  int at = 0;
  for (const Matrix& b : blocks) {
    stacked.middleRows(at, b.rows()) = b;
    at += static_cast<int>(b.rows());
  }
  r.basis = rows == 0 ? Matrix(Matrix::Identity(d, d)) : NullSpace(stacked, 1e-9);
  r.dimension = static_cast<int>(r.basis.cols());
  const Vector image = phi.matrix * sys.unit();
  r.contains_unit = r.dimension > 0 && SubspaceContains(r.basis, image.normalized());
  return r;
}

std::vector<OrderIsomorphism> ForcedOrderIsomorphisms(const SystemModel& sys) {
  const auto cone = sys.ExactCone();
  if (!cone) throw Error(ErrorCode::kModelUnsupported, "order isomorphisms need exact cone data");
  const int d = sys.dim();
  const int m = static_cast<int>(cone->rays.size());
  if (static_cast<int>(cone->facet_normals.size()) != m) return {};
  if (m > 8) throw Error(ErrorCode::kEnumerationBudgetExceeded, "more than 8 extreme rays");

  std::vector<OrderIsomorphism> out;
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // Unknowns: vec(Φ) column-major, then λ_j. Rows: Φ f_j − λ_j v_σ(j) = 0.
    Matrix a = Matrix::Zero(d * m, d * d + m);
    for (int j = 0; j < m; ++j) {
      const Vector& f = cone->facet_normals[j];
      for (int col = 0; col < d; ++col) {
        a.block(j * d, col * d, d, d) = f(col) * Matrix::Identity(d, d);
      }
      a.block(j * d, d * d + j, d, 1) = -cone->rays[perm[j]];
    }
    const Matrix null = NullSpace(a, 1e-9);
    if (null.cols() == 0) continue;
    Vector z;
    if (null.cols() == 1) {
      z = null.col(0);
    } else {
      // A family of solutions: take the member with every λ_j = 1.
      const Vector rhs = -a.rightCols(m) * Vector::Ones(m);
      z.resize(d * d + m);
      z.head(d * d) = a.leftCols(d * d).colPivHouseholderQr().solve(rhs);
      z.tail(m).setOnes();
      if ((a * z).cwiseAbs().maxCoeff() > 1e-9) continue;
    }
    Vector lambda = z.tail(m);
    if (lambda.minCoeff() < 0) {
      z = -z;
      lambda = -lambda;
    }
    if (lambda.minCoeff() <= 1e-9) continue;
    z /= lambda.mean();
    const Matrix phi = Eigen::Map<const Matrix>(z.data(), d, d);
    if (std::abs(phi.determinant()) <= 1e-9) continue;
    const bool seen = std::any_of(out.begin(), out.end(), [&](const OrderIsomorphism& o) {
      return (o.matrix - phi).cwiseAbs().maxCoeff() <= 1e-9;
    });
    if (seen) continue;
    OrderIsomorphism iso;
    iso.matrix = phi;
    iso.symmetric = (phi - phi.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * phi.cwiseAbs().maxCoeff();
    iso.min_eigenvalue = SymmetricEigenvalues(phi).minCoeff();
    out.push_back(std::move(iso));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace gpt_spectra
