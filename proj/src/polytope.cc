#include "gpt_spectra/polytope.h"

#include <algorithm>
#include <bit>
#include <set>

#include "gpt_spectra/errors.h"
#include "gpt_spectra/linalg.h"

namespace gpt_spectra {
namespace {

constexpr int kMaxRays = 64;
constexpr int kMaxAmbient = 7;

bool ContainsDirection(const std::vector<Vector>& set, const Vector& unit, double tol) {
  for (const Vector& v : set) {
    if ((v - unit).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

// Facets of a full-dimensional cone.
std::vector<Vector> FullDimensionalFacets(const std::vector<Vector>& rays, double tol) {
  const int n = static_cast<int>(rays.size());
  const int d = static_cast<int>(rays.front().size());
  std::vector<Vector> facets;
  if (d == 1) {
    facets.push_back(Vector::Constant(1, rays.front()(0) >= 0 ? 1.0 : -1.0));
    return facets;
  }
  std::vector<int> idx(d - 1);
  for (int i = 0; i < d - 1; ++i) idx[i] = i;
  Matrix sub(d - 1, d);
  while (true) {
    for (int i = 0; i < d - 1; ++i) sub.row(i) = rays[idx[i]].transpose();
    const Matrix null = NullSpace(sub, 1e-10);
    if (null.cols() == 1) {
      Vector f = null.col(0);
      double lo = 0.0, hi = 0.0;
      for (const Vector& r : rays) {
        const double v = f.dot(r) / std::max(1.0, r.norm());
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (lo >= -tol || hi <= tol) {
        double sum = 0.0;
        for (const Vector& r : rays) sum += f.dot(r);
        if (sum < 0) f = -f;
        f.normalize();
        if (!ContainsDirection(facets, f, 1e-7)) facets.push_back(f);
      }
    }
    // Next combination.
    int k = d - 2;
    while (k >= 0 && idx[k] == n - (d - 1) + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < d - 1; ++j) idx[j] = idx[j - 1] + 1;
  }
  return facets;
}

}  // namespace

FacetResult EnumerateConeFacets(const std::vector<Vector>& rays, double tol) {
  if (rays.empty()) throw Error(ErrorCode::kDegenerateInput, "no rays");
  const int d = static_cast<int>(rays.front().size());
  if (static_cast<int>(rays.size()) > kMaxRays || d > kMaxAmbient) {
    throw Error(ErrorCode::kEnumerationBudgetExceeded,
                "facet enumeration is limited to 64 rays in dimension 7");
  }
  const Matrix ray_matrix = StackColumns(rays, d);
  const Matrix span = OrthonormalBasis(ray_matrix, 1e-10);
  FacetResult out;
  if (span.cols() == d) {
    out.facets = FullDimensionalFacets(rays, tol);
    out.hull_equations = Matrix(d, 0);
    return out;
  }
  out.degenerate = true;
  out.hull_equations = NullSpace(span.transpose(), 1e-10);
  if (span.cols() == 0) return out;
  std::vector<Vector> local;
  for (const Vector& r : rays) local.push_back(span.transpose() * r);
  for (const Vector& f : FullDimensionalFacets(local, tol)) {
    out.facets.push_back((span * f).normalized());
  }
  return out;
}

FacetResult FacetEnumerate(const std::vector<Vector>& vertices, double tol) {
  return EnumerateConeFacets(vertices, tol);
}

std::vector<Vector> DualCone(const std::vector<Vector>& rays, const Matrix& inner_product,
                             double tol) {
  Eigen::FullPivLU<Matrix> lu(inner_product);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kSingularInnerProduct, "inner product matrix is singular");
  }
  const FacetResult facets = EnumerateConeFacets(rays, tol);
  if (facets.degenerate) {
    throw Error(ErrorCode::kDegenerateInput, "rays do not span the space");
  }
  // y ∈ dual iff (G y)·x >= 0 for all x iff G y ∈ cone(facet normals).
  std::vector<Vector> out;
  for (const Vector& f : facets.facets) out.push_back(lu.solve(f).normalized());
  return out;
}

bool SameRaySet(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  auto normalize = [](const std::vector<Vector>& in) {
    std::vector<Vector> out;
    for (const Vector& v : in) {
      const Vector u = v.normalized();
      if (!ContainsDirection(out, u, 1e-7)) out.push_back(u);
    }
    return out;
  };
  const std::vector<Vector> na = normalize(a), nb = normalize(b);
  if (na.size() != nb.size()) return false;
  for (const Vector& v : na) {
    if (!ContainsDirection(nb, v, tol)) return false;
  }
  return true;
}

Polytope::Polytope(std::vector<Vector> vertices, double tol)
    : tol_(tol), vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(ErrorCode::kDegenerateInput, "polytope has no vertices");
  if (vertices_.size() > 64) {
    throw Error(ErrorCode::kEnumerationBudgetExceeded, "at most 64 vertices are supported");
  }
  dim_ = static_cast<int>(vertices_.front().size());
  for (const Vector& v : vertices_) {
    if (v.size() != dim_) throw Error(ErrorCode::kDimensionMismatch, "vertex length differs");
    if (std::abs(v(0) - 1.0) > 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "vertices must be homogenized with leading 1");
    }
  }
  const FacetResult res = FacetEnumerate(vertices_, tol_);
  if (res.degenerate) {
    throw Error(ErrorCode::kDegenerateInput, "vertices are not full-dimensional");
  }
  facets_ = res.facets;
  auto tight_masks = [&]() {
    std::vector<VertexMask> masks;
    for (const Vector& f : facets_) {
      VertexMask mask = 0;
      for (int i = 0; i < num_vertices(); ++i) {
        if (std::abs(f.dot(vertices_[i])) <= tol_) mask |= VertexMask{1} << i;
      }
      masks.push_back(mask);
    }
    return masks;
  };
  facet_masks_ = tight_masks();
  // A listed point is a vertex iff the facets tight at it cut out only it.
  std::vector<Vector> extreme;
  for (int i = 0; i < num_vertices(); ++i) {
    VertexMask cut = full_mask();
    for (VertexMask m : facet_masks_) {
      if (m & (VertexMask{1} << i)) cut &= m;
    }
    if (cut == (VertexMask{1} << i)) extreme.push_back(vertices_[i]);
  }
  if (extreme.size() != vertices_.size()) {
    vertices_ = std::move(extreme);
    facet_masks_ = tight_masks();
  }
  std::set<VertexMask> seen{full_mask()};
  std::vector<VertexMask> frontier{full_mask()};
  while (!frontier.empty()) {
    std::vector<VertexMask> next;
    for (VertexMask face : frontier) {
      for (VertexMask facet : facet_masks_) {
        const VertexMask meet = face & facet;
        if (seen.insert(meet).second) next.push_back(meet);
      }
    }
    frontier = std::move(next);
  }
  faces_.assign(seen.begin(), seen.end());
  std::stable_sort(faces_.begin(), faces_.end(), [](VertexMask x, VertexMask y) {
    return std::popcount(x) > std::popcount(y);
  });
}

VertexMask Polytope::full_mask() const {
  return num_vertices() == 64 ? ~VertexMask{0} : (VertexMask{1} << num_vertices()) - 1;
}

Vector Polytope::NormalizedFacet(int k) const {
  double hi = 0.0;
  for (const Vector& v : vertices_) hi = std::max(hi, facets_[k].dot(v));
  return facets_[k] / hi;
}

VertexMask Polytope::FaceOf(const Vector& x, double tol) const {
  if (x.size() != dim_) throw Error(ErrorCode::kDimensionMismatch, "point length");
  const double scale = std::max(1.0, x.norm());
  VertexMask face = full_mask();
  bool any_tight = false;
  for (size_t k = 0; k < facets_.size(); ++k) {
    const double value = facets_[k].dot(x) / scale;
    if (value < -tol) throw Error(ErrorCode::kNotInCone, "point violates a facet inequality");
    if (value <= tol) {
      face &= facet_masks_[k];
      any_tight = true;
    }
  }
  if (x.norm() <= tol) return 0;
  return any_tight ? face : full_mask();
}

std::vector<Vector> Polytope::FaceVertices(VertexMask mask) const {
  std::vector<Vector> out;
  for (int i = 0; i < num_vertices(); ++i) {
    if (mask & (VertexMask{1} << i)) out.push_back(vertices_[i]);
  }
  return out;
}

int Polytope::VertexIndex(const Vector& x, double tol) const {
  if (x.size() != dim_ || std::abs(x(0)) < 1e-300) return -1;
  const Vector normalized = x / x(0);
  for (int i = 0; i < num_vertices(); ++i) {
    if ((vertices_[i] - normalized).cwiseAbs().maxCoeff() <= tol) return i;
  }
  return -1;
}

}  // namespace gpt_spectra
