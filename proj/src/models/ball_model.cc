#include "models/ball_model.h"

#include <cmath>

#include "gpt_spectra/linalg.h"
#include "models/model_util.h"

namespace gpt_spectra::internal {

BallModel::BallModel(int k) : SystemModel(k + 1, Vector::Unit(k + 1, 0)) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "ball model needs k >= 2");
}

Vector BallModel::PureAt(const Vector& direction) const {
  Vector x(dim());
  x(0) = 1.0;
  x.tail(dim() - 1) = direction.normalized();
  return x;
}

double BallModel::ConeMargin(const Vector& x) const {
  CheckDim(x, "point");
  return RelativeMargin(x(0) - x.tail(dim() - 1).norm(), x.norm());
}

EffectRange BallModel::RangeOverStates(const Vector& e) const {
  CheckDim(e, "effect");
  const Vector w = e.tail(dim() - 1);
  const double r = w.norm();
  EffectRange out;
  out.max = e(0) + r;
  out.min = e(0) - r;
  const Vector dir = r > 0 ? Vector(w) : Vector(Vector::Unit(dim() - 1, 0));
  out.argmax = PureAt(dir);
  out.argmin = PureAt(-dir);
  return out;
}

Vector BallModel::CenterState() const { return unit(); }

Vector BallModel::SamplePure(Rng& rng) const { return PureAt(UnitGaussian(dim() - 1, rng)); }

Vector BallModel::SampleState(Rng& rng) const {
  const int k = dim() - 1;
  const double radius = std::pow(rng.Uniform(), 1.0 / k);
  Vector x(dim());
  x(0) = 1.0;
  x.tail(k) = radius * UnitGaussian(k, rng);
  return x;
}

std::vector<Vector> BallModel::PureNet(int size) const {
  const int k = dim() - 1;
  std::vector<Vector> out;
  if (k == 2) {
    for (int i = 0; i < size; ++i) {
      const double t = 2.0 * M_PI * i / size;
      out.push_back(PureAt(Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
    return out;
  }
  for (int i = 0; i < k; ++i) {
    out.push_back(PureAt(Vector::Unit(k, i)));
    out.push_back(PureAt(-Vector::Unit(k, i)));
  }
  Rng rng(0xba11ULL + static_cast<std::uint64_t>(k));
  while (static_cast<int>(out.size()) < size) out.push_back(SamplePure(rng));
  return out;
}

bool BallModel::IsPure(const Vector& x, double tol) const {
  CheckDim(x, "state");
  return std::abs(x(0) - 1.0) <= tol && std::abs(x.tail(dim() - 1).norm() - 1.0) <= tol;
}

Vector BallModel::Tilde(const Vector& pure) const {
  if (!IsPure(pure, 1e-9)) throw Error(ErrorCode::kNotPure, "not on the unit sphere");
  return 0.5 * PureAt(pure.tail(dim() - 1));
}

Vector BallModel::Hat(const Vector& atom) const {
  const auto split = SplitAtomic(atom);
  if (!split || std::abs(split->scale - 1.0) > 1e-9) {
    throw Error(ErrorCode::kNotAtomic, "not a maximal effect on an extreme ray");
  }
  return PureAt(atom.tail(dim() - 1));
}

std::optional<AtomicSplit> BallModel::SplitAtomic(const Vector& e) const {
  CheckDim(e, "effect");
  const double r = e.tail(dim() - 1).norm();
  if (e(0) <= 1e-14 || std::abs(e(0) - r) > 1e-12 * std::max(1.0, e(0))) return std::nullopt;
  const double c = 2.0 * e(0);
  return AtomicSplit{c, 0.5 * PureAt(e.tail(dim() - 1))};
}

std::vector<WeightedState> BallModel::Decompose(const Vector& state) const {
  CheckDim(state, "state");
  const Vector v = state.tail(dim() - 1) / state(0);
  const double r = v.norm();
  const Vector dir = r > 1e-15 ? Vector(v / r) : Vector(Vector::Unit(dim() - 1, 0));
  std::vector<WeightedState> out;
  const double minus = r > 1.0 - 2e-12 ? 0.0 : 0.5 * (1.0 - r);
  out.push_back({1.0 - minus, PureAt(dir)});
  if (minus > 0.0) out.push_back({minus, PureAt(-dir)});
  return out;
}

std::vector<std::vector<WeightedState>> BallModel::EnumerateDecompositions(
    const Vector& state) const {
  return {Decompose(state)};
}

std::optional<std::vector<Vector>> BallModel::DistinguishingCandidate(
    const std::vector<Vector>& states) const {
  if (states.size() == 1) return std::vector<Vector>{unit()};
  if (states.size() != 2 || !IsPure(states[0], 1e-9) || !IsPure(states[1], 1e-9)) {
    return std::nullopt;
  }
  if ((states[0].tail(dim() - 1) + states[1].tail(dim() - 1)).norm() > 1e-9) return std::nullopt;
  const Vector t = Tilde(states[0]);
  return std::vector<Vector>{t, unit() - t};
}

Matrix BallModel::SampleReversible(Rng& rng) const {
  Matrix m = Matrix::Identity(dim(), dim());
  m.bottomRightCorner(dim() - 1, dim() - 1) = SampleOrthogonal(dim() - 1, rng);
  return m;
}

std::optional<Matrix> BallModel::ReversibleMapBetween(const Vector& from, const Vector& to) const {
  if (!IsPure(from, 1e-9) || !IsPure(to, 1e-9)) return std::nullopt;
  Matrix m = Matrix::Identity(dim(), dim());
  m.bottomRightCorner(dim() - 1, dim() - 1) =
      ReflectionBetween(from.tail(dim() - 1).normalized(), to.tail(dim() - 1).normalized());
  return m;
}

Face BallModel::FaceOf(const Vector& x) const {
  CheckDim(x, "point");
  if (x.norm() < 1e-300) return Face{Matrix(dim(), 0)};
  const double margin = ConeMargin(x);
  if (margin < -1e-10) throw Error(ErrorCode::kNotInCone, "outside the Lorentz cone");
  if (margin <= 1e-10) return Face{x.normalized()};
  return Face{Matrix::Identity(dim(), dim())};
}

FilterMaps BallModel::FiltersFor(const Face& face, const Matrix*) const {
  FilterMaps f;
  const int n = dim();
  if (face.rank() == 0 || face.rank() == n) {
    f.map = face.rank() == 0 ? Matrix(Matrix::Zero(n, n)) : Matrix(Matrix::Identity(n, n));
    f.complement = Matrix::Identity(n, n) - f.map;
    return f;
  }
  Vector ray = face.basis.col(0);
  if (ray(0) < 0) ray = -ray;
  const Vector pure = PureAt(ray.tail(n - 1));
  Vector anti = pure;
  anti.tail(n - 1) = -anti.tail(n - 1);
  f.map = pure * Tilde(pure).transpose();
  f.complement = anti * Tilde(anti).transpose();
  return f;
}

std::vector<Face> BallModel::EnumerateFaces(int cap, std::uint64_t seed, bool* exhaustive) const {
  if (exhaustive) *exhaustive = false;
  std::vector<Face> out{Face{Matrix(dim(), 0)}, Face{Matrix::Identity(dim(), dim())}};
  Rng rng(seed);
  while (static_cast<int>(out.size()) < cap) out.push_back(Face{SamplePure(rng).normalized()});
  return out;
}

std::vector<ExpansionTerm> BallModel::SpectralTerms(const Vector& a, double merge_tol) const {
  CheckDim(a, "element");
  const Vector w = a.tail(dim() - 1);
  const double r = w.norm();
  if (2.0 * r <= merge_tol * std::max(1.0, std::abs(a(0)) + r)) return {{a(0), unit()}};
  const Vector up = Tilde(PureAt(w));
  return {{a(0) + r, up}, {a(0) - r, unit() - up}};
}

std::vector<Vector> BallModel::AtomicRefinement(const Vector& unit_element) const {
  CheckDim(unit_element, "unit");
  if ((unit_element - unit()).norm() <= 1e-9) {
    const Vector first = Tilde(PureAt(Vector::Unit(dim() - 1, 0)));
    return {first, unit() - first};
  }
  if (unit_element.norm() <= 1e-9) return {};
  const auto split = SplitAtomic(unit_element);
  if (!split || std::abs(split->scale - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "not a projective unit of the ball");
  }
  return {unit_element};
}

Vector BallModel::UnitState(const Vector& projective_unit) const {
  if (projective_unit.norm() <= 1e-12) return Vector::Zero(dim());
  if ((projective_unit - unit()).norm() <= 1e-9) return CenterState();
  return Hat(projective_unit);
}

}  // namespace gpt_spectra::internal
