#pragma once

#include <functional>

#include <Eigen/Dense>

#include "gpt_spectra/types.h"

namespace gpt_spectra {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Real coordinates of a d×d Hermitian matrix in the basis that is orthonormal
/// for the trace pairing: the d diagonal units E_jj, then for each j < k the
/// pair (E_jk + E_kj)/√2, (−iE_jk + iE_kj)/√2. With this choice tr(XY) is the
/// dot product of coordinates, the identity has coordinates (1,…,1,0,…,0),
/// and a density matrix and the effect with the same matrix share coordinates.
Vector HermitianToCoords(const ComplexMatrix& h);
ComplexMatrix CoordsToHermitian(const Vector& coords, int d);

/// Hilbert dimension d for a coordinate vector of length d².
int HilbertDimension(Eigen::Index coords_size);

/// Coordinates of the projector |ψ⟩⟨ψ| for a (not necessarily normalized) ψ.
Vector ProjectorCoords(const ComplexVector& psi);

/// Real d²×d² matrix of a real-linear map on Hermitian matrices.
Matrix SuperoperatorMatrix(const std::function<ComplexMatrix(const ComplexMatrix&)>& f, int d);

/// Matrix of X ↦ U X U†.
Matrix ConjugationMatrix(const ComplexMatrix& u);

}  // namespace gpt_spectra
