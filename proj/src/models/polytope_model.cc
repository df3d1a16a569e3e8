#include "models/polytope_model.h"

#include <algorithm>
#include <bit>
#include <map>

#include "gpt_spectra/core.h"
#include "gpt_spectra/linalg.h"
#include "models/model_util.h"

namespace gpt_spectra::internal {
namespace {

constexpr int kLpBudget = 20000;
constexpr long kSymmetryBudget = 500000;

}  // namespace

PolytopeModel::PolytopeModel(ModelKind kind, std::vector<Vector> vertices, nlohmann::json params)
    : SystemModel(vertices.empty() ? 1 : static_cast<int>(vertices.front().size()),
                  Vector::Unit(vertices.empty() ? 1 : vertices.front().size(), 0)),
      kind_(kind),
      poly_(std::move(vertices)),
      params_(std::move(params)) {
  for (int k = 0; k < static_cast<int>(poly_.facets().size()); ++k) {
    const Vector atom = poly_.NormalizedFacet(k);
    VertexMask argmax = 0;
    for (int i = 0; i < poly_.num_vertices(); ++i) {
      if (atom.dot(poly_.vertices()[i]) >= 1.0 - 1e-9) argmax |= VertexMask{1} << i;
    }
    atoms_.push_back(atom);
    atom_argmax_.push_back(argmax);
  }
  ComputeSymmetries();
}

void PolytopeModel::ComputeSymmetries() {
  const int n = poly_.num_vertices(), d = dim();
  const auto& verts = poly_.vertices();
  // Greedy linear basis among the vertices.
  std::vector<int> base;
  Matrix chosen(d, 0);
  for (int i = 0; i < n && static_cast<int>(base.size()) < d; ++i) {
    Matrix trial(d, chosen.cols() + 1);
    trial << chosen, verts[i];
    if (NumericalRank(trial) == trial.cols()) {
      chosen = trial;
      base.push_back(i);
    }
  }
  const Matrix base_inv = chosen.inverse();
  long count = 1;
  for (int k = 0; k < d; ++k) count *= (n - k);
  symmetries_.push_back(Matrix::Identity(d, d));
  if (count > kSymmetryBudget) {
    symmetries_complete_ = false;
    return;
  }
  std::vector<int> image(d, -1);
  std::vector<bool> used(n, false);
  Matrix targets(d, d);
  // Depth-first over injective assignments of the basis vertices.
  auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == d) {
      for (int k = 0; k < d; ++k) targets.col(k) = verts[image[k]];
      const Matrix t = targets * base_inv;
      if ((t - Matrix::Identity(d, d)).norm() < 1e-9) return;
      std::vector<bool> hit(n, false);
      for (int i = 0; i < n; ++i) {
        const int j = poly_.VertexIndex(t * verts[i], 1e-9);
        if (j < 0 || hit[j]) return;
        hit[j] = true;
      }
      symmetries_.push_back(t);
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      image[depth] = j;
      self(self, depth + 1);
      used[j] = false;
    }
  };
  recurse(recurse, 0);
}

Matrix PolytopeModel::DefaultInnerProduct() const {
  if (poly_.num_vertices() == dim()) {
    const Matrix v_inv = StackColumns(poly_.vertices(), dim()).inverse();
    return v_inv.transpose() * v_inv;
  }
  return Matrix::Identity(dim(), dim());
}

const std::vector<std::vector<int>>& PolytopeModel::DistinguishableSets() const {
  std::call_once(sets_once_, [this] {
    const int n = poly_.num_vertices();
    const auto& verts = poly_.vertices();
    std::vector<std::vector<int>> all;
    std::vector<std::vector<int>> layer;
    for (int i = 0; i < n; ++i) layer.push_back({i});
    int lp_calls = 0;
    while (!layer.empty()) {
      all.insert(all.end(), layer.begin(), layer.end());
      std::vector<std::vector<int>> next;
      for (const auto& set : layer) {
        for (int j = set.back() + 1; j < n; ++j) {
          std::vector<int> cand = set;
          cand.push_back(j);
          // Every subset of a distinguishable set is distinguishable.
          bool subsets_ok = true;
          for (size_t drop = 0; drop + 1 < cand.size() && subsets_ok; ++drop) {
            std::vector<int> sub = cand;
            sub.erase(sub.begin() + static_cast<long>(drop));
            subsets_ok = std::binary_search(layer.begin(), layer.end(), sub);
          }
          if (!subsets_ok) continue;
          if (++lp_calls > kLpBudget) {
            throw Error(ErrorCode::kEnumerationBudgetExceeded,
                        "too many vertex subsets to test for distinguishability");
          }
          std::vector<Vector> states;
          for (int k : cand) states.push_back(verts[k]);
          if (SolveDistinguishingLp(states, verts, unit())) next.push_back(cand);
        }
      }
      layer = std::move(next);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return a < b;
    });
    distinguishable_sets_ = std::move(all);
  });
  return distinguishable_sets_;
}

int PolytopeModel::max_distinguishable() const {
  return static_cast<int>(DistinguishableSets().front().size());
}

double PolytopeModel::ConeMargin(const Vector& x) const {
  CheckDim(x, "point");
  double m = 1e300;
  for (const Vector& f : poly_.facets()) m = std::min(m, f.dot(x));
  return RelativeMargin(m, x.norm());
}

EffectRange PolytopeModel::RangeOverStates(const Vector& e) const {
  CheckDim(e, "effect");
  EffectRange r;
  r.min = 1e300;
  r.max = -1e300;
  for (const Vector& v : poly_.vertices()) {
    const double val = e.dot(v);
    if (val < r.min) {
      r.min = val;
      r.argmin = v;
    }
    if (val > r.max) {
      r.max = val;
      r.argmax = v;
    }
  }
  return r;
}

Vector PolytopeModel::CenterState() const {
  Vector c = Vector::Zero(dim());
  for (const Vector& v : poly_.vertices()) c += v;
  return c / poly_.num_vertices();
}

std::optional<PolyhedralCone> PolytopeModel::ExactCone() const {
  return PolyhedralCone{poly_.vertices(), poly_.facets()};
}

Vector PolytopeModel::SamplePure(Rng& rng) const {
  return poly_.vertices()[rng.UniformInt(0, poly_.num_vertices() - 1)];
}

Vector PolytopeModel::SampleState(Rng& rng) const {
  const Vector w = SampleDirichlet(poly_.num_vertices(), rng);
  Vector x = Vector::Zero(dim());
  for (int i = 0; i < poly_.num_vertices(); ++i) x += w(i) * poly_.vertices()[i];
  return x;
}

std::vector<Vector> PolytopeModel::PureNet(int) const { return poly_.vertices(); }

bool PolytopeModel::IsPure(const Vector& x, double tol) const {
  CheckDim(x, "state");
  return std::abs(x(0) - 1.0) <= tol && poly_.VertexIndex(x, tol) >= 0;
}

int PolytopeModel::FacetIndexOf(const Vector& e) const {
  const double norm = e.norm();
  if (norm < 1e-300) return -1;
  const Vector dir = e / norm;
  for (int k = 0; k < static_cast<int>(poly_.facets().size()); ++k) {
    if ((poly_.facets()[k] - dir).cwiseAbs().maxCoeff() <= 1e-9) return k;
  }
  return -1;
}

Vector PolytopeModel::Tilde(const Vector& pure) const {
  if (!IsPure(pure, 1e-9)) throw Error(ErrorCode::kNotPure, "not a vertex");
  const VertexMask target = VertexMask{1} << poly_.VertexIndex(pure, 1e-9);
  std::vector<int> hits;
  for (size_t k = 0; k < atoms_.size(); ++k) {
    if (atom_argmax_[k] == target) hits.push_back(static_cast<int>(k));
  }
  if (hits.size() != 1) {
    throw Error(ErrorCode::kNotProjective,
                hits.empty() ? "no atomic effect equals 1 only on this vertex"
                             : "several atomic effects equal 1 only on this vertex");
  }
  return atoms_[hits.front()];
}

Vector PolytopeModel::Hat(const Vector& atom) const {
  const int k = FacetIndexOf(atom);
  if (k < 0 || (atom - atoms_[k]).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::kNotAtomic, "not a normalized facet functional");
  }
  if (std::popcount(atom_argmax_[k]) != 1) {
    throw Error(ErrorCode::kNotProjective, "atomic effect equals 1 on more than one vertex");
  }
  return poly_.vertices()[std::countr_zero(atom_argmax_[k])];
}

std::optional<AtomicSplit> PolytopeModel::SplitAtomic(const Vector& e) const {
  CheckDim(e, "effect");
  const int k = FacetIndexOf(e);
  if (k < 0) return std::nullopt;
  return AtomicSplit{RangeOverStates(e).max, atoms_[k]};
}

Vector PolytopeModel::SampleAtom(Rng& rng) const {
  return atoms_[rng.UniformInt(0, static_cast<int>(atoms_.size()) - 1)];
}

std::optional<std::vector<WeightedState>> PolytopeModel::WeightsOn(const std::vector<int>& set,
                                                                   const Vector& state) const {
  std::vector<Vector> cols;
  for (int k : set) cols.push_back(poly_.vertices()[k]);
  const Matrix v = StackColumns(cols, dim());
  const Vector w = v.colPivHouseholderQr().solve(state);
  if ((v * w - state).norm() > 1e-10 * std::max(1.0, state.norm())) return std::nullopt;
  if (w.minCoeff() < -1e-12) return std::nullopt;
  std::vector<WeightedState> parts;
  for (size_t i = 0; i < set.size(); ++i) {
    if (w(i) > 1e-15) parts.push_back({w(i), cols[i]});
  }
  return parts;
}

std::vector<WeightedState> PolytopeModel::Decompose(const Vector& state) const {
  CheckDim(state, "state");
  for (const auto& set : DistinguishableSets()) {
    if (auto parts = WeightsOn(set, state)) return *parts;
  }
  throw Error(ErrorCode::kDecompositionUnavailable,
              "state is not a mixture of perfectly distinguishable vertices");
}

std::vector<std::vector<WeightedState>> PolytopeModel::EnumerateDecompositions(
    const Vector& state) const {
  CheckDim(state, "state");
  std::vector<std::vector<WeightedState>> out;
  std::vector<std::vector<int>> supports;
  for (const auto& set : DistinguishableSets()) {
    auto parts = WeightsOn(set, state);
    if (!parts) continue;
    std::vector<int> support;
    for (const auto& p : *parts) support.push_back(poly_.VertexIndex(p.state));
    std::sort(support.begin(), support.end());
    if (std::find(supports.begin(), supports.end(), support) != supports.end()) continue;
    supports.push_back(support);
    out.push_back(*parts);
  }
  return out;
}

Matrix PolytopeModel::SampleReversible(Rng& rng) const {
  return symmetries_[rng.UniformInt(0, static_cast<int>(symmetries_.size()) - 1)];
}

std::optional<Matrix> PolytopeModel::ReversibleMapBetween(const Vector& from,
                                                          const Vector& to) const {
  for (const Matrix& g : symmetries_) {
    if ((g * from - to).cwiseAbs().maxCoeff() <= 1e-9) return g;
  }
  return std::nullopt;
}

Face PolytopeModel::FaceOfMask(VertexMask mask) const {
  if (mask == 0) return Face{Matrix(dim(), 0)};
  return Face{OrthonormalBasis(StackColumns(poly_.FaceVertices(mask), dim()))};
}

VertexMask PolytopeModel::MaskOf(const Face& face) const {
  VertexMask mask = 0;
  if (face.empty()) return mask;
  for (int i = 0; i < poly_.num_vertices(); ++i) {
    if (SubspaceContains(face.basis, poly_.vertices()[i])) mask |= VertexMask{1} << i;
  }
  return mask;
}

Face PolytopeModel::FaceOf(const Vector& x) const {
  CheckDim(x, "point");
  return FaceOfMask(poly_.FaceOf(x));
}

Vector PolytopeModel::RelativeInteriorPoint(const Matrix& basis) const {
  Vector sum = Vector::Zero(dim());
  if (basis.cols() == 0) return sum;
  for (const Vector& v : poly_.vertices()) {
    if (SubspaceContains(basis, v)) sum += v;
  }
  return sum;
}

FilterMaps PolytopeModel::FiltersFor(const Face& face, const Matrix* inner_product) const {
  const Matrix g = inner_product ? *inner_product : DefaultInnerProduct();
  FilterMaps f;
  const int d = dim();
  f.map = face.empty() ? Matrix(Matrix::Zero(d, d)) : FormOrthogonalProjector(face.basis, g);
  std::vector<Vector> perp;
  for (const Vector& v : poly_.vertices()) {
    if (face.empty() || (face.basis.transpose() * g * v).cwiseAbs().maxCoeff() <= 1e-9) {
      perp.push_back(v);
    }
  }
  if (perp.empty()) {
    f.complement = Matrix::Zero(d, d);
  } else {
    f.complement = FormOrthogonalProjector(OrthonormalBasis(StackColumns(perp, d)), g);
  }
  return f;
}

std::vector<Face> PolytopeModel::EnumerateFaces(int cap, std::uint64_t seed,
                                                bool* exhaustive) const {
  std::vector<VertexMask> masks = poly_.face_lattice();
  const bool all = static_cast<int>(masks.size()) <= cap;
  if (exhaustive) *exhaustive = all;
  if (!all) {
    // Keep Ω and the empty face; sample the rest uniformly.
    std::vector<VertexMask> middle(masks.begin() + 1, masks.end() - 1);
    Rng rng(seed);
    std::shuffle(middle.begin(), middle.end(), rng.engine());
    middle.resize(std::max(0, cap - 2));
    masks = {poly_.face_lattice().front()};
    masks.insert(masks.end(), middle.begin(), middle.end());
    masks.push_back(0);
  }
  std::vector<Face> out;
  for (VertexMask m : masks) out.push_back(FaceOfMask(m));
  return out;
}

}  // namespace gpt_spectra::internal
