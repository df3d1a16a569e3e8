#include "models/classical_model.h"

#include <algorithm>
#include <numeric>

#include "gpt_spectra/linalg.h"
#include "models/model_util.h"

namespace gpt_spectra::internal {

ClassicalModel::ClassicalModel(int n) : SystemModel(n, Vector::Ones(n)) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "classical model needs n >= 1");
}

nlohmann::json ClassicalModel::params() const { return {{"n", dim()}}; }

Vector ClassicalModel::Basis(int i) const { return Vector::Unit(dim(), i); }

double ClassicalModel::ConeMargin(const Vector& x) const {
  CheckDim(x, "point");
  return RelativeMargin(x.minCoeff(), x.norm());
}

EffectRange ClassicalModel::RangeOverStates(const Vector& e) const {
  CheckDim(e, "effect");
  EffectRange r;
  Eigen::Index lo, hi;
  r.min = e.minCoeff(&lo);
  r.max = e.maxCoeff(&hi);
  r.argmin = Basis(static_cast<int>(lo));
  r.argmax = Basis(static_cast<int>(hi));
  return r;
}

Vector ClassicalModel::CenterState() const { return Vector::Constant(dim(), 1.0 / dim()); }

std::optional<PolyhedralCone> ClassicalModel::ExactCone() const {
  PolyhedralCone cone;
  for (int i = 0; i < dim(); ++i) {
    cone.rays.push_back(Basis(i));
    cone.facet_normals.push_back(Basis(i));
  }
  return cone;
}

Vector ClassicalModel::SamplePure(Rng& rng) const { return Basis(rng.UniformInt(0, dim() - 1)); }

Vector ClassicalModel::SampleState(Rng& rng) const { return SampleDirichlet(dim(), rng); }

std::vector<Vector> ClassicalModel::PureNet(int) const {
  std::vector<Vector> out;
  for (int i = 0; i < dim(); ++i) out.push_back(Basis(i));
  return out;
}

int ClassicalModel::PureIndex(const Vector& x, double tol) const {
  CheckDim(x, "state");
  for (int i = 0; i < dim(); ++i) {
    if ((x - Basis(i)).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return -1;
}

bool ClassicalModel::IsPure(const Vector& x, double tol) const { return PureIndex(x, tol) >= 0; }

Vector ClassicalModel::Tilde(const Vector& pure) const {
  const int i = PureIndex(pure, 1e-9);
  if (i < 0) throw Error(ErrorCode::kNotPure, "not a vertex of the simplex");
  return Basis(i);
}

Vector ClassicalModel::Hat(const Vector& atom) const {
  const int i = PureIndex(atom, 1e-9);
  if (i < 0) throw Error(ErrorCode::kNotAtomic, "not a coordinate functional");
  return Basis(i);
}

std::optional<AtomicSplit> ClassicalModel::SplitAtomic(const Vector& e) const {
  CheckDim(e, "effect");
  Eigen::Index k;
  const double top = e.maxCoeff(&k);
  if (top <= 1e-14) return std::nullopt;
  for (int i = 0; i < dim(); ++i) {
    if (i != k && std::abs(e(i)) > 1e-12 * std::max(1.0, top)) return std::nullopt;
  }
  return AtomicSplit{top, Basis(static_cast<int>(k))};
}

Vector ClassicalModel::SampleAtom(Rng& rng) const { return SamplePure(rng); }

std::vector<WeightedState> ClassicalModel::Decompose(const Vector& state) const {
  CheckDim(state, "state");
  std::vector<WeightedState> out;
  for (int i = 0; i < dim(); ++i) {
    if (state(i) > 0.0) out.push_back({state(i), Basis(i)});
  }
  return out;
}

std::vector<std::vector<WeightedState>> ClassicalModel::EnumerateDecompositions(
    const Vector& state) const {
  return {Decompose(state)};
}

std::vector<Vector> ClassicalModel::ValidityStates() const { return PureNet(0); }

Matrix ClassicalModel::SampleReversible(Rng& rng) const {
  std::vector<int> perm(dim());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  Matrix m = Matrix::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) m(perm[i], i) = 1.0;
  return m;
}

std::optional<Matrix> ClassicalModel::ReversibleMapBetween(const Vector& from,
                                                           const Vector& to) const {
  const int i = PureIndex(from, 1e-9), j = PureIndex(to, 1e-9);
  if (i < 0 || j < 0) return std::nullopt;
  Matrix m = Matrix::Identity(dim(), dim());
  m.row(i).swap(m.row(j));
  return m;
}

Face ClassicalModel::FaceOf(const Vector& x) const {
  CheckDim(x, "point");
  const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
  if (x.minCoeff() < -1e-10 * scale) throw Error(ErrorCode::kNotInCone, "negative coordinate");
  std::vector<Vector> cols;
  for (int i = 0; i < dim(); ++i) {
    if (x(i) > 1e-11 * scale) cols.push_back(Basis(i));
  }
  return Face{StackColumns(cols, dim())};
}

FilterMaps ClassicalModel::FiltersFor(const Face& face, const Matrix*) const {
  const Vector diag = (face.basis * face.basis.transpose()).diagonal();
  Vector indicator(dim());
  for (int i = 0; i < dim(); ++i) indicator(i) = diag(i) > 0.5 ? 1.0 : 0.0;
  FilterMaps f;
  f.map = indicator.asDiagonal();
  f.complement = (Vector::Ones(dim()) - indicator).asDiagonal();
  return f;
}

std::vector<Face> ClassicalModel::EnumerateFaces(int cap, std::uint64_t seed,
                                                 bool* exhaustive) const {
  auto face_of_mask = [&](std::uint64_t mask) {
    std::vector<Vector> cols;
    for (int i = 0; i < dim(); ++i) {
      if (mask & (std::uint64_t{1} << i)) cols.push_back(Basis(i));
    }
    return Face{StackColumns(cols, dim())};
  };
  std::vector<Face> out;
  const bool all = dim() < 20 && (std::uint64_t{1} << dim()) <= static_cast<std::uint64_t>(cap);
  if (exhaustive) *exhaustive = all;
  if (all) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << dim()); ++m) out.push_back(face_of_mask(m));
    return out;
  }
  Rng rng(seed);
  out.push_back(face_of_mask(0));
  std::uint64_t full = dim() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim()) - 1;
  out.push_back(face_of_mask(full));
  while (static_cast<int>(out.size()) < cap) {
    std::uint64_t m = 0;
    for (int i = 0; i < dim() && i < 64; ++i) {
      if (rng.Uniform() < 0.5) m |= std::uint64_t{1} << i;
    }
    out.push_back(face_of_mask(m));
  }
  return out;
}

std::vector<ExpansionTerm> ClassicalModel::SpectralTerms(const Vector& a, double merge_tol) const {
  CheckDim(a, "element");
  std::vector<int> order(dim());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i) > a(j); });
  const double tol = merge_tol * std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<ExpansionTerm> out;
  size_t start = 0;
  while (start < order.size()) {
    size_t end = start + 1;
    while (end < order.size() && a(order[end - 1]) - a(order[end]) <= tol) ++end;
    ExpansionTerm term;
    term.unit = Vector::Zero(dim());
    double sum = 0.0;
    for (size_t k = start; k < end; ++k) {
      term.unit(order[k]) = 1.0;
      sum += a(order[k]);
    }
    term.coefficient = sum / static_cast<double>(end - start);
    out.push_back(term);
    start = end;
  }
  return out;
}

std::vector<Vector> ClassicalModel::AtomicRefinement(const Vector& unit) const {
  CheckDim(unit, "unit");
  std::vector<Vector> out;
  for (int i = 0; i < dim(); ++i) {
    if (std::abs(unit(i) - 1.0) <= 1e-9) {
      out.push_back(Basis(i));
    } else if (std::abs(unit(i)) > 1e-9) {
      throw Error(ErrorCode::kInvalidArgument, "not a projective unit of the simplex");
    }
  }
  return out;
}

}  // namespace gpt_spectra::internal
