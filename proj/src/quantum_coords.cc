#include "gpt_spectra/quantum_coords.h"

#include <cmath>

#include "gpt_spectra/errors.h"

namespace gpt_spectra {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

Vector HermitianToCoords(const ComplexMatrix& h) {
  const int d = static_cast<int>(h.rows());
  Vector c(d * d);
  int m = 0;
  for (int j = 0; j < d; ++j) c(m++) = h(j, j).real();
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const std::complex<double> hjk = 0.5 * (h(j, k) + std::conj(h(k, j)));
      c(m++) = kSqrt2 * hjk.real();
      c(m++) = -kSqrt2 * hjk.imag();
    }
  }
  return c;
}

ComplexMatrix CoordsToHermitian(const Vector& coords, int d) {
  if (coords.size() != d * d) {
    throw Error(ErrorCode::kDimensionMismatch, "coordinate length is not d²");
  }
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  int m = 0;
  for (int j = 0; j < d; ++j) h(j, j) = coords(m++);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const double s = coords(m++) / kSqrt2;
      const double a = coords(m++) / kSqrt2;
      h(j, k) = std::complex<double>(s, -a);
      h(k, j) = std::complex<double>(s, a);
    }
  }
  return h;
}

int HilbertDimension(Eigen::Index coords_size) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(coords_size))));
  if (d * d != coords_size) throw Error(ErrorCode::kDimensionMismatch, "length is not a square");
  return d;
}

Vector ProjectorCoords(const ComplexVector& psi) {
  const ComplexVector n = psi.normalized();
  return HermitianToCoords(n * n.adjoint());
}

Matrix SuperoperatorMatrix(const std::function<ComplexMatrix(const ComplexMatrix&)>& f, int d) {
  Matrix m(d * d, d * d);
  for (int col = 0; col < d * d; ++col) {
    m.col(col) = HermitianToCoords(f(CoordsToHermitian(Vector::Unit(d * d, col), d)));
  }
  return m;
}

Matrix ConjugationMatrix(const ComplexMatrix& u) {
  return SuperoperatorMatrix([&](const ComplexMatrix& x) -> ComplexMatrix { return u * x * u.adjoint(); },
                             static_cast<int>(u.rows()));
}

}  // namespace gpt_spectra
