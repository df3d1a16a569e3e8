#pragma once

#include <cstdint>
#include <vector>

#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// H-representation of the cone generated by a set of rays.
struct FacetResult {
  /// Unit-length functionals f with f(ray) >= 0 for every ray, one per facet.
  std::vector<Vector> facets;
  /// True when the rays do not span the ambient space; facets are then
  /// relative to the span and `hull_equations` holds functionals (columns)
  /// vanishing on it.
  bool degenerate = false;
  Matrix hull_equations;
};

/// Brute-force facet enumeration over linearly independent ray subsets of
/// size dim-1 with containment verification. Desk scale only: at most 64 rays
/// in ambient dimension at most 7 (a 6-dimensional polytope, homogenized).
FacetResult EnumerateConeFacets(const std::vector<Vector>& rays, double tol = 1e-9);

/// Facets of conv(vertices); vertices are homogenized with a leading 1.
FacetResult FacetEnumerate(const std::vector<Vector>& vertices, double tol = 1e-9);

/// Generating rays of the internal dual {y : yᵀ G x >= 0 for all x in cone}.
/// Throws kSingularInnerProduct when G is singular.
std::vector<Vector> DualCone(const std::vector<Vector>& rays, const Matrix& inner_product,
                             double tol = 1e-9);

/// Ray-set equality up to positive scaling: rays normalized to unit length and
/// matched within `tol`.
bool SameRaySet(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol = 1e-9);

using VertexMask = std::uint64_t;

/// A polytope Ω in homogenized coordinates together with its facets and face
/// lattice. Faces are vertex subsets stored as bit masks.
class Polytope {
 public:
  explicit Polytope(std::vector<Vector> vertices, double tol = 1e-9);

  int dim() const { return dim_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const std::vector<Vector>& facets() const { return facets_; }
  /// Facet functional scaled so that its maximum over the vertices is 1.
  Vector NormalizedFacet(int k) const;
  const std::vector<VertexMask>& facet_masks() const { return facet_masks_; }
  /// All faces including the empty face and Ω, ordered by decreasing size.
  const std::vector<VertexMask>& face_lattice() const { return faces_; }
  VertexMask full_mask() const;

  /// Smallest face containing x (intersection of the facets tight at x).
  /// Throws kNotInCone when x violates a facet by more than `tol`.
  VertexMask FaceOf(const Vector& x, double tol = 1e-9) const;
  std::vector<Vector> FaceVertices(VertexMask mask) const;
  /// Index of the vertex equal to x/u(x), or -1.
  int VertexIndex(const Vector& x, double tol = 1e-9) const;

 private:
  int dim_;
  double tol_;
  std::vector<Vector> vertices_;
  std::vector<Vector> facets_;
  std::vector<VertexMask> facet_masks_;
  std::vector<VertexMask> faces_;
};

}  // namespace gpt_spectra
