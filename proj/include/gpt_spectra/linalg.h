#pragma once

#include <vector>

#include "gpt_spectra/types.h"

namespace gpt_spectra {

/// Orthonormal basis (columns) of the column span of `m`; singular values
/// below `tol * max(1, largest)` count as zero.
Matrix OrthonormalBasis(const Matrix& m, double tol = 1e-10);

/// Orthonormal basis of {x : m x = 0}.
Matrix NullSpace(const Matrix& m, double tol = 1e-10);

int NumericalRank(const Matrix& m, double tol = 1e-10);

/// Orthonormal basis of span(a) ∩ span(b), both given by orthonormal columns.
Matrix IntersectSubspaces(const Matrix& a, const Matrix& b, double tol = 1e-9);

/// True when every column of `inner` lies in span(outer) (orthonormal columns).
bool SubspaceContains(const Matrix& outer, const Matrix& inner, double tol = 1e-9);

Matrix StackColumns(const std::vector<Vector>& columns, int rows);

/// Eigenvalues of the symmetric part, ascending.
Vector SymmetricEigenvalues(const Matrix& m);

/// Projection onto span(basis) orthogonal with respect to the form
/// <x, y> = xᵀ G y.
Matrix FormOrthogonalProjector(const Matrix& basis, const Matrix& gram);

}  // namespace gpt_spectra
