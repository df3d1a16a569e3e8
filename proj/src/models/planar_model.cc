#include "models/planar_model.h"

#include <algorithm>
#include <cmath>

#include "models/model_util.h"

namespace gpt_spectra::internal {
namespace {

Eigen::Vector2d Normal(double t) { return {std::cos(t), std::sin(t)}; }
Eigen::Vector2d NormalPrime(double t) { return {-std::sin(t), std::cos(t)}; }

double Cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

double WrapAngle(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  return t < 0 ? t + 2.0 * M_PI : t;
}

}  // namespace

PlanarBodyModel::PlanarBodyModel(int chord_grid)
    : SystemModel(3, Vector::Unit(3, 0)), chord_grid_(chord_grid) {
  if (chord_grid < 16) throw Error(ErrorCode::kInvalidArgument, "chord grid too coarse");
}

Eigen::Vector2d PlanarBodyModel::Boundary(double theta) const {
  return Support(theta) * Normal(theta) + SupportD1(theta) * NormalPrime(theta);
}

double PlanarBodyModel::NormalAngle(const Eigen::Vector2d& p) const {
  constexpr int kGrid = 1024;
  double best = 0.0, best_val = -1e300;
  for (int i = 0; i < kGrid; ++i) {
    const double t = 2.0 * M_PI * i / kGrid;
    const double v = Normal(t).dot(p) - Support(t);
    if (v > best_val) {
      best_val = v;
      best = t;
    }
  }
  for (int it = 0; it < 50; ++it) {
    const double d1 = NormalPrime(best).dot(p) - SupportD1(best);
    const double d2 = -Normal(best).dot(p) - SupportD2(best);
    if (d2 >= 0) break;
    const double step = d1 / d2;
    best -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return WrapAngle(best);
}

Vector PlanarBodyModel::PureAtAngle(double theta) const {
  const Eigen::Vector2d x = Boundary(theta);
  return Eigen::Vector3d(1.0, x.x(), x.y());
}

Vector PlanarBodyModel::AtomAtAngle(double theta) const {
  const double h_far = Support(theta + M_PI);
  const double total = Support(theta) + h_far;
  return Eigen::Vector3d(h_far, std::cos(theta), std::sin(theta)) / total;
}

double PlanarBodyModel::MinSupportGap(double t, const Eigen::Vector2d& p) const {
  constexpr int kGrid = 720;
  double best = 0.0, best_val = 1e300;
  for (int i = 0; i < kGrid; ++i) {
    const double th = 2.0 * M_PI * i / kGrid;
    const double v = t * Support(th) - Normal(th).dot(p);
    if (v < best_val) {
      best_val = v;
      best = th;
    }
  }
  double th = best;
  for (int it = 0; it < 40; ++it) {
    const double d1 = t * SupportD1(th) - NormalPrime(th).dot(p);
    const double d2 = t * SupportD2(th) + Normal(th).dot(p);
    if (d2 <= 0) break;
    const double step = d1 / d2;
    if (std::abs(step) > 0.1) break;
    th -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return std::min(best_val, t * Support(th) - Normal(th).dot(p));
}

double PlanarBodyModel::ConeMargin(const Vector& x) const {
  CheckDim(x, "point");
  return RelativeMargin(MinSupportGap(x(0), Eigen::Vector2d(x(1), x(2))), x.norm());
}

EffectRange PlanarBodyModel::RangeOverStates(const Vector& e) const {
  CheckDim(e, "effect");
  const Eigen::Vector2d w(e(1), e(2));
  const double r = w.norm();
  const double alpha = r > 0 ? std::atan2(w.y(), w.x()) : 0.0;
  EffectRange out;
  out.max = e(0) + r * Support(alpha);
  out.min = e(0) - r * Support(alpha + M_PI);
  out.argmax = PureAtAngle(alpha);
  out.argmin = PureAtAngle(alpha + M_PI);
  return out;
}

Vector PlanarBodyModel::SamplePure(Rng& rng) const {
  return PureAtAngle(rng.Uniform(0.0, 2.0 * M_PI));
}

Vector PlanarBodyModel::SampleState(Rng& rng) const {
  double radius = 0.0;
  for (int i = 0; i < 360; ++i) radius = std::max(radius, Boundary(2.0 * M_PI * i / 360).norm());
  while (true) {
    const Eigen::Vector2d p(rng.Uniform(-radius, radius), rng.Uniform(-radius, radius));
    if (MinSupportGap(1.0, p) > 0.0) return Eigen::Vector3d(1.0, p.x(), p.y());
  }
}

std::vector<Vector> PlanarBodyModel::PureNet(int size) const {
  std::vector<Vector> out;
  for (int i = 0; i < size; ++i) out.push_back(PureAtAngle(2.0 * M_PI * i / size));
  return out;
}

bool PlanarBodyModel::IsPure(const Vector& x, double tol) const {
  CheckDim(x, "state");
  if (std::abs(x(0) - 1.0) > tol) return false;
  const Eigen::Vector2d p(x(1), x(2));
  return (Boundary(NormalAngle(p)) - p).norm() <= tol;
}

Vector PlanarBodyModel::Tilde(const Vector& pure) const {
  if (!IsPure(pure, 1e-9)) throw Error(ErrorCode::kNotPure, "not a boundary point");
  return AtomAtAngle(NormalAngle(Eigen::Vector2d(pure(1), pure(2))));
}

std::optional<AtomicSplit> PlanarBodyModel::SplitAtomic(const Vector& e) const {
  CheckDim(e, "effect");
  const double r = Eigen::Vector2d(e(1), e(2)).norm();
  if (r <= 1e-14) return std::nullopt;
  const double alpha = std::atan2(e(2), e(1));
  if (std::abs(e(0) - r * Support(alpha + M_PI)) > 1e-12 * std::max(1.0, std::abs(e(0)))) {
    return std::nullopt;
  }
  const double c = e(0) + r * Support(alpha);
  return AtomicSplit{c, e / c};
}

Vector PlanarBodyModel::Hat(const Vector& atom) const {
  const auto split = SplitAtomic(atom);
  if (!split || std::abs(split->scale - 1.0) > 1e-9) {
    throw Error(ErrorCode::kNotAtomic, "not a maximal effect on an extreme ray");
  }
  return PureAtAngle(std::atan2(atom(2), atom(1)));
}

Vector PlanarBodyModel::SampleAtom(Rng& rng) const {
  return AtomAtAngle(rng.Uniform(0.0, 2.0 * M_PI));
}

std::vector<double> PlanarBodyModel::ChordsThrough(const Eigen::Vector2d& p, int max_chords) const {
  const int n = chord_grid_;
  auto g = [&](double t) {
    const Eigen::Vector2d a = Boundary(t);
    return Cross(Boundary(t + M_PI) - a, p - a);
  };
  double scale = 0.0;
  std::vector<double> values(n + 1);
  for (int i = 0; i <= n; ++i) {
    values[i] = g(M_PI * i / n);
    scale = std::max(scale, std::abs(values[i]));
  }
  const double zero_tol = 1e-13 * std::max(1.0, scale);
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    const double t0 = M_PI * i / n, t1 = M_PI * (i + 1) / n;
    if (std::abs(values[i]) <= zero_tol) {
      roots.push_back(t0);
      continue;
    }
    if (std::abs(values[i + 1]) <= zero_tol || values[i] * values[i + 1] > 0) continue;
    double lo = t0, hi = t1, glo = values[i];
    for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if ((gm < 0) == (glo < 0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  if (static_cast<int>(roots.size()) > max_chords) {
    std::vector<double> kept;
    for (int k = 0; k < max_chords; ++k) {
      kept.push_back(roots[static_cast<size_t>(k) * roots.size() / max_chords]);
    }
    roots = std::move(kept);
  }
  return roots;
}

std::vector<WeightedState> PlanarBodyModel::ChordDecomposition(const Eigen::Vector2d& p,
                                                               double theta) const {
  const Eigen::Vector2d near = Boundary(theta), far = Boundary(theta + M_PI);
  const Eigen::Vector2d d = near - far;
  double t = std::clamp((p - far).dot(d) / d.squaredNorm(), 0.0, 1.0);
  // Boundary states lose their roundoff partner.
  if (t < 1e-12) t = 0.0;
  if (t > 1.0 - 1e-12) t = 1.0;
  std::vector<WeightedState> out;
  if (t > 0) out.push_back({t, PureAtAngle(theta)});
  if (t < 1) out.push_back({1.0 - t, PureAtAngle(theta + M_PI)});
  std::stable_sort(out.begin(), out.end(), [](const WeightedState& a, const WeightedState& b) {
    return a.probability > b.probability;
  });
  return out;
}

std::vector<WeightedState> PlanarBodyModel::Decompose(const Vector& state) const {
  CheckDim(state, "state");
  const Eigen::Vector2d p(state(1) / state(0), state(2) / state(0));
  const std::vector<double> chords = ChordsThrough(p, 1);
  if (chords.empty()) {
    throw Error(ErrorCode::kDecompositionUnavailable, "no antipodal chord through the state");
  }
  return ChordDecomposition(p, chords.front());
}

std::vector<std::vector<WeightedState>> PlanarBodyModel::EnumerateDecompositions(
    const Vector& state) const {
  CheckDim(state, "state");
  const Eigen::Vector2d p(state(1) / state(0), state(2) / state(0));
  std::vector<std::vector<WeightedState>> out;
  for (double theta : ChordsThrough(p)) out.push_back(ChordDecomposition(p, theta));
  return out;
}

std::optional<std::vector<Vector>> PlanarBodyModel::DistinguishingCandidate(
    const std::vector<Vector>& states) const {
  if (states.size() == 1) return std::vector<Vector>{unit()};
  if (states.size() != 2 || !IsPure(states[0], 1e-9) || !IsPure(states[1], 1e-9)) {
    return std::nullopt;
  }
  const double a0 = NormalAngle(Eigen::Vector2d(states[0](1), states[0](2)));
  const double a1 = NormalAngle(Eigen::Vector2d(states[1](1), states[1](2)));
  if (std::abs(std::remainder(a1 - a0 - M_PI, 2.0 * M_PI)) > 1e-8) return std::nullopt;
  const Vector t = AtomAtAngle(a0);
  return std::vector<Vector>{t, unit() - t};
}

Face PlanarBodyModel::FaceOf(const Vector& x) const {
  CheckDim(x, "point");
  if (x.norm() < 1e-300) return Face{Matrix(3, 0)};
  const double margin = ConeMargin(x);
  if (margin < -1e-10) throw Error(ErrorCode::kNotInCone, "outside the cone");
  if (margin <= 1e-10) return Face{x.normalized()};
  return Face{Matrix::Identity(3, 3)};
}

FilterMaps PlanarBodyModel::FiltersFor(const Face& face, const Matrix*) const {
  FilterMaps f;
  if (face.rank() == 0 || face.rank() == 3) {
    f.map = face.rank() == 0 ? Matrix(Matrix::Zero(3, 3)) : Matrix(Matrix::Identity(3, 3));
    f.complement = Matrix::Identity(3, 3) - f.map;
    return f;
  }
  const Vector ray = face.basis.col(0);
  const double theta = NormalAngle(Eigen::Vector2d(ray(1) / ray(0), ray(2) / ray(0)));
  f.map = PureAtAngle(theta) * AtomAtAngle(theta).transpose();
  f.complement = PureAtAngle(theta + M_PI) * AtomAtAngle(theta + M_PI).transpose();
  return f;
}

std::vector<Face> PlanarBodyModel::EnumerateFaces(int cap, std::uint64_t seed,
                                                  bool* exhaustive) const {
  if (exhaustive) *exhaustive = false;
  std::vector<Face> out{Face{Matrix(3, 0)}, Face{Matrix::Identity(3, 3)}};
  Rng rng(seed);
  while (static_cast<int>(out.size()) < cap) out.push_back(Face{SamplePure(rng).normalized()});
  return out;
}

std::vector<ExpansionTerm> PlanarBodyModel::SpectralTerms(const Vector& a, double merge_tol) const {
  CheckDim(a, "element");
  const double r = Eigen::Vector2d(a(1), a(2)).norm();
  const double alpha = r > 0 ? std::atan2(a(2), a(1)) : 0.0;
  const double hi = a(0) + r * Support(alpha), lo = a(0) - r * Support(alpha + M_PI);
  if (hi - lo <= merge_tol * std::max({1.0, std::abs(hi), std::abs(lo)})) return {{a(0), unit()}};
  return {{hi, AtomAtAngle(alpha)}, {lo, AtomAtAngle(alpha + M_PI)}};
}

std::vector<Vector> PlanarBodyModel::AtomicRefinement(const Vector& unit_element) const {
  CheckDim(unit_element, "unit");
  if ((unit_element - unit()).norm() <= 1e-9) return {AtomAtAngle(0.0), AtomAtAngle(M_PI)};
  if (unit_element.norm() <= 1e-9) return {};
  const auto split = SplitAtomic(unit_element);
  if (!split || std::abs(split->scale - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "not a projective unit");
  }
  return {unit_element};
}

Vector PlanarBodyModel::UnitState(const Vector& projective_unit) const {
  if (projective_unit.norm() <= 1e-12) return Vector::Zero(3);
  if ((projective_unit - unit()).norm() <= 1e-9) return CenterState();
  return Hat(projective_unit);
}

// --- ellipse ------------------------------------------------------------------

EllipseModel::EllipseModel(double a, double b, int chord_grid)
    : PlanarBodyModel(chord_grid), a_(a), b_(b) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::kInvalidAxis, "ellipse axes must be positive");
}

nlohmann::json EllipseModel::params() const {
  return {{"a", a_}, {"b", b_}, {"chord_grid", chord_grid()}};
}

double EllipseModel::Support(double t) const {
  const double c = std::cos(t), s = std::sin(t);
  return std::sqrt(a_ * a_ * c * c + b_ * b_ * s * s);
}

double EllipseModel::SupportD1(double t) const {
  return 0.5 * (b_ * b_ - a_ * a_) * std::sin(2.0 * t) / Support(t);
}

double EllipseModel::SupportD2(double t) const {
  const double h = Support(t);
  const double g1 = (b_ * b_ - a_ * a_) * std::sin(2.0 * t);
  const double g2 = 2.0 * (b_ * b_ - a_ * a_) * std::cos(2.0 * t);
  return g2 / (2.0 * h) - g1 * g1 / (4.0 * h * h * h);
}

double EllipseModel::NormalAngle(const Eigen::Vector2d& p) const {
  return WrapAngle(std::atan2(p.y() / (b_ * b_), p.x() / (a_ * a_)));
}

Matrix EllipseModel::SampleReversible(Rng& rng) const {
  const Matrix r = SampleOrthogonal(2, rng);
  Matrix m = Matrix::Identity(3, 3);
  m.bottomRightCorner(2, 2) = Eigen::Vector2d(a_, b_).asDiagonal() * r *
                              Eigen::Vector2d(1.0 / a_, 1.0 / b_).asDiagonal();
  return m;
}

std::optional<Matrix> EllipseModel::ReversibleMapBetween(const Vector& from,
                                                         const Vector& to) const {
  if (!IsPure(from, 1e-9) || !IsPure(to, 1e-9)) return std::nullopt;
  const Eigen::Vector2d q0(from(1) / a_, from(2) / b_), q1(to(1) / a_, to(2) / b_);
  Matrix m = Matrix::Identity(3, 3);
  m.bottomRightCorner(2, 2) = Eigen::Vector2d(a_, b_).asDiagonal() *
                              ReflectionBetween(q0.normalized(), q1.normalized()) *
                              Eigen::Vector2d(1.0 / a_, 1.0 / b_).asDiagonal();
  return m;
}

// --- puffed triangle ------------------------------------------------------------

PuffedTriangleModel::PuffedTriangleModel(double eps3, double eps2, int chord_grid)
    : PlanarBodyModel(chord_grid), eps3_(eps3), eps2_(eps2) {
  // h + h'' = 1 - 8 ε₃ cos 3θ - 3 ε₂ cos 2θ must stay positive.
  if (1.0 - 8.0 * std::abs(eps3) - 3.0 * std::abs(eps2) <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "puffed triangle is not strictly convex");
  }
  symmetries_.push_back(Matrix::Identity(3, 3));
  Matrix mirror = Matrix::Identity(3, 3);
  mirror(2, 2) = -1.0;
  symmetries_.push_back(mirror);
  if (eps2 == 0.0) {
    for (int k = 1; k < 3; ++k) {
      const double t = 2.0 * M_PI * k / 3.0;
      Matrix rot = Matrix::Identity(3, 3);
      rot.bottomRightCorner(2, 2) << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      symmetries_.push_back(rot);
      symmetries_.push_back(rot * mirror);
    }
  }
}

nlohmann::json PuffedTriangleModel::params() const {
  return {{"eps3", eps3_}, {"eps2", eps2_}, {"chord_grid", chord_grid()}};
}

double PuffedTriangleModel::Support(double t) const {
  return 1.0 + eps3_ * std::cos(3.0 * t) + eps2_ * std::cos(2.0 * t);
}

double PuffedTriangleModel::SupportD1(double t) const {
  return -3.0 * eps3_ * std::sin(3.0 * t) - 2.0 * eps2_ * std::sin(2.0 * t);
}

double PuffedTriangleModel::SupportD2(double t) const {
  return -9.0 * eps3_ * std::cos(3.0 * t) - 4.0 * eps2_ * std::cos(2.0 * t);
}

Matrix PuffedTriangleModel::SampleReversible(Rng& rng) const {
  return symmetries_[rng.UniformInt(0, static_cast<int>(symmetries_.size()) - 1)];
}

std::optional<Matrix> PuffedTriangleModel::ReversibleMapBetween(const Vector& from,
                                                                const Vector& to) const {
  for (const Matrix& g : symmetries_) {
    if ((g * from - to).norm() <= 1e-9) return g;
  }
  return std::nullopt;
}

}  // namespace gpt_spectra::internal
