#include "models/quantum_model.h"

#include <algorithm>

#include "gpt_spectra/linalg.h"
#include "models/model_util.h"

namespace gpt_spectra::internal {
namespace {

Vector IdentityCoords(int d) {
  Vector u = Vector::Zero(d * d);
  u.head(d).setOnes();
  return u;
}

}  // namespace

ComplexMatrix SampleUnitary(int d, Rng& rng) {
  ComplexMatrix z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = {rng.Normal(), rng.Normal()};
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

QuantumModel::QuantumModel(int d) : SystemModel(d * d, IdentityCoords(d)), d_(d) {
  if (d < 2) throw Error(ErrorCode::kInvalidArgument, "quantum model needs d >= 2");
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> QuantumModel::Eig(const Vector& x) const {
  CheckDim(x, "element");
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(CoordsToHermitian(x, d_));
}

double QuantumModel::ConeMargin(const Vector& x) const {
  return RelativeMargin(Eig(x).eigenvalues()(0), x.norm());
}

EffectRange QuantumModel::RangeOverStates(const Vector& e) const {
  const auto es = Eig(e);
  EffectRange r;
  r.min = es.eigenvalues()(0);
  r.max = es.eigenvalues()(d_ - 1);
  r.argmin = ProjectorCoords(es.eigenvectors().col(0));
  r.argmax = ProjectorCoords(es.eigenvectors().col(d_ - 1));
  return r;
}

Vector QuantumModel::CenterState() const { return unit() / d_; }

ComplexVector QuantumModel::RandomVector(Rng& rng) const {
  ComplexVector v(d_);
  do {
    for (int i = 0; i < d_; ++i) v(i) = {rng.Normal(), rng.Normal()};
  } while (v.norm() < 1e-8);
  return v.normalized();
}

Vector QuantumModel::SamplePure(Rng& rng) const { return ProjectorCoords(RandomVector(rng)); }

Vector QuantumModel::SampleState(Rng& rng) const {
  ComplexMatrix g(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) g(i, j) = {rng.Normal(), rng.Normal()};
  const ComplexMatrix rho = g * g.adjoint();
  return HermitianToCoords(rho / rho.trace().real());
}

std::vector<Vector> QuantumModel::PureNet(int size) const {
  std::vector<Vector> out;
  for (int i = 0; i < d_; ++i) out.push_back(ProjectorCoords(ComplexVector::Unit(d_, i)));
  for (int j = 0; j < d_; ++j) {
    for (int k = j + 1; k < d_; ++k) {
      for (std::complex<double> phase : {std::complex<double>(1, 0), std::complex<double>(-1, 0),
                                         std::complex<double>(0, 1), std::complex<double>(0, -1)}) {
        ComplexVector v = ComplexVector::Zero(d_);
        v(j) = 1.0;
        v(k) = phase;
        out.push_back(ProjectorCoords(v));
      }
    }
  }
  Rng rng(0x9e7c0ffeeULL + static_cast<std::uint64_t>(d_));
  while (static_cast<int>(out.size()) < size) out.push_back(SamplePure(rng));
  return out;
}

bool QuantumModel::IsPure(const Vector& x, double tol) const {
  const auto es = Eig(x);
  const Vector& ev = es.eigenvalues();
  if (std::abs(ev(d_ - 1) - 1.0) > tol) return false;
  for (int i = 0; i < d_ - 1; ++i) {
    if (std::abs(ev(i)) > tol) return false;
  }
  return true;
}

Vector QuantumModel::Tilde(const Vector& pure) const {
  if (!IsPure(pure, 1e-9)) throw Error(ErrorCode::kNotPure, "not a rank-one projector");
  return ProjectorCoords(Eig(pure).eigenvectors().col(d_ - 1));
}

Vector QuantumModel::Hat(const Vector& atom) const {
  if (!IsPure(atom, 1e-9)) throw Error(ErrorCode::kNotAtomic, "not a rank-one projector");
  return ProjectorCoords(Eig(atom).eigenvectors().col(d_ - 1));
}

std::optional<AtomicSplit> QuantumModel::SplitAtomic(const Vector& e) const {
  const auto es = Eig(e);
  const Vector& ev = es.eigenvalues();
  const double top = ev(d_ - 1);
  if (top <= 1e-14) return std::nullopt;
  for (int i = 0; i < d_ - 1; ++i) {
    if (std::abs(ev(i)) > 1e-12 * std::max(1.0, top)) return std::nullopt;
  }
  return AtomicSplit{top, ProjectorCoords(es.eigenvectors().col(d_ - 1))};
}

std::vector<WeightedState> QuantumModel::Decompose(const Vector& state) const {
  const auto es = Eig(state);
  std::vector<WeightedState> out;
  for (int i = d_ - 1; i >= 0; --i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) out.push_back({p, ProjectorCoords(es.eigenvectors().col(i))});
  }
  return out;
}

std::vector<std::vector<WeightedState>> QuantumModel::EnumerateDecompositions(
    const Vector& state) const {
  return {Decompose(state)};
}

std::vector<Vector> QuantumModel::ValidityStates() const { return PureNet(24 * d_ * d_); }

ComplexMatrix QuantumModel::SupportProjector(const Vector& x, double rel_tol) const {
  const auto es = Eig(x);
  const double top = std::max(std::abs(es.eigenvalues()(d_ - 1)), 1e-300);
  ComplexMatrix q = ComplexMatrix::Zero(d_, d_);
  for (int i = 0; i < d_; ++i) {
    if (es.eigenvalues()(i) > rel_tol * top) {
      q += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
  }
  return q;
}

std::optional<std::vector<Vector>> QuantumModel::DistinguishingCandidate(
    const std::vector<Vector>& states) const {
  if (states.empty()) return std::nullopt;
  std::vector<ComplexMatrix> supports;
  for (const Vector& s : states) supports.push_back(SupportProjector(s, 1e-10));
  ComplexMatrix rest = ComplexMatrix::Identity(d_, d_);
  for (size_t i = 0; i < supports.size(); ++i) {
    for (size_t j = i + 1; j < supports.size(); ++j) {
      if ((supports[i] * supports[j]).norm() > 1e-9) return std::nullopt;
    }
    rest -= supports[i];
  }
  std::vector<Vector> effects;
  for (const ComplexMatrix& q : supports) effects.push_back(HermitianToCoords(q));
  effects.front() += HermitianToCoords(rest);
  return effects;
}

Matrix QuantumModel::SampleReversible(Rng& rng) const {
  return ConjugationMatrix(SampleUnitary(d_, rng));
}

std::optional<Matrix> QuantumModel::ReversibleMapBetween(const Vector& from,
                                                         const Vector& to) const {
  if (!IsPure(from, 1e-9) || !IsPure(to, 1e-9)) return std::nullopt;
  auto frame = [&](const Vector& p) {
    ComplexMatrix m(d_, d_ + 1);
    m.col(0) = Eig(p).eigenvectors().col(d_ - 1);
    m.rightCols(d_) = ComplexMatrix::Identity(d_, d_);
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    return ComplexMatrix(qr.householderQ());
  };
  const ComplexMatrix u = frame(to) * frame(from).adjoint();
  return ConjugationMatrix(u);
}

Face QuantumModel::FaceOfProjector(const ComplexMatrix& q) const {
  const Matrix m = SuperoperatorMatrix(
      [&](const ComplexMatrix& x) -> ComplexMatrix { return q * x * q; }, d_);
  return Face{OrthonormalBasis(m, 1e-9)};
}

Face QuantumModel::FaceOf(const Vector& x) const {
  if (x.norm() < 1e-300) return Face{Matrix(dim(), 0)};
  if (ConeMargin(x) < -1e-10) throw Error(ErrorCode::kNotInCone, "not positive semidefinite");
  return FaceOfProjector(SupportProjector(x));
}

FilterMaps QuantumModel::FiltersFor(const Face& face, const Matrix*) const {
  const ComplexMatrix q = SupportProjector(face.basis * (face.basis.transpose() * unit()), 0.5);
  const ComplexMatrix qc = ComplexMatrix::Identity(d_, d_) - q;
  FilterMaps f;
  f.map = SuperoperatorMatrix([&](const ComplexMatrix& x) -> ComplexMatrix { return q * x * q; }, d_);
  f.complement =
      SuperoperatorMatrix([&](const ComplexMatrix& x) -> ComplexMatrix { return qc * x * qc; }, d_);
  return f;
}

std::vector<Face> QuantumModel::EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const {
  if (d_ > 3) {
    throw Error(ErrorCode::kLatticeTooLarge, "face lattices are sampled only for d <= 3");
  }
  if (exhaustive) *exhaustive = false;
  std::vector<Face> out;
  out.push_back(Face{Matrix(dim(), 0)});
  out.push_back(Face{Matrix::Identity(dim(), dim())});
  auto add_rank = [&](const ComplexMatrix& frame, int rank) {
    ComplexMatrix q = frame.leftCols(rank) * frame.leftCols(rank).adjoint();
    out.push_back(FaceOfProjector(q));
  };
  for (int rank = 1; rank < d_; ++rank) add_rank(ComplexMatrix::Identity(d_, d_), rank);
  Rng rng(seed);
  while (static_cast<int>(out.size()) < cap) {
    const ComplexMatrix u = SampleUnitary(d_, rng);
    add_rank(u, 1 + static_cast<int>(out.size()) % (d_ - 1));
  }
  return out;
}

std::vector<ExpansionTerm> QuantumModel::SpectralTerms(const Vector& a, double merge_tol) const {
  const auto es = Eig(a);
  const Vector& ev = es.eigenvalues();
  const double tol = merge_tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<ExpansionTerm> out;
  int start = d_ - 1;
  while (start >= 0) {
    int end = start - 1;
    while (end >= 0 && ev(end + 1) - ev(end) <= tol) --end;
    ComplexMatrix q = ComplexMatrix::Zero(d_, d_);
    double sum = 0.0;
    for (int i = start; i > end; --i) {
      q += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      sum += ev(i);
    }
    out.push_back({sum / (start - end), HermitianToCoords(q)});
    start = end;
  }
  return out;
}

std::vector<Vector> QuantumModel::AtomicRefinement(const Vector& unit_element) const {
  const auto es = Eig(unit_element);
  std::vector<Vector> out;
  for (int i = d_ - 1; i >= 0; --i) {
    const double lambda = es.eigenvalues()(i);
    if (std::abs(lambda - 1.0) <= 1e-9) {
      out.push_back(ProjectorCoords(es.eigenvectors().col(i)));
    } else if (std::abs(lambda) > 1e-9) {
      throw Error(ErrorCode::kInvalidArgument, "not a projector");
    }
  }
  return out;
}

}  // namespace gpt_spectra::internal
