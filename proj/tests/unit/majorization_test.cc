#include "gpt_spectra/majorization.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gpt_spectra/catalog.h"
#include "gpt_spectra/spectral.h"
#include "test_util.h"

namespace gpt_spectra {
namespace {

using test::QubitState;
using test::ShannonNats;
using test::Vec;
using test::VectorsNear;

GTEST_TEST(MajorizesTest, Examples) {
  EXPECT_TRUE(Majorizes(Vec({1, 0}), Vec({0.5, 0.5})));
  EXPECT_TRUE(Majorizes(Vec({0.5, 0.3, 0.2}), Vec({0.4, 0.3, 0.3})));
  EXPECT_FALSE(Majorizes(Vec({0.6, 0.4}), Vec({0.7, 0.3})));
  // Order of entries does not matter; totals must agree.
  EXPECT_TRUE(Majorizes(Vec({0.2, 0.5, 0.3}), Vec({0.3, 0.4, 0.3})));
  EXPECT_FALSE(Majorizes(Vec({1, 0}), Vec({0.4, 0.4})));
}

GTEST_TEST(WeakMajorizesTest, Examples) {
  EXPECT_TRUE(WeakMajorizes(Vec({1, 0}), Vec({0.4, 0.4})));
  EXPECT_FALSE(WeakMajorizes(Vec({0.3, 0.3}), Vec({0.5, 0.2})));
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const Vector x = Vec({rng.Uniform(), rng.Uniform(), rng.Uniform()});
    EXPECT_TRUE(WeakMajorizes(x, x));
  }
  // Shorter vectors are zero-padded.
  EXPECT_TRUE(WeakMajorizes(Vec({0.9}), Vec({0.5, 0.3})));
}

GTEST_TEST(DoublySubstochasticTest, Examples) {
  EXPECT_TRUE(IsDoublySubstochastic(Matrix::Identity(3, 3)));
  Matrix a(2, 2), b(2, 2);
  a << 0.5, 0.5, 0.5, 0.2;
  b << 1, 0, 0.5, 0.5;
  EXPECT_TRUE(IsDoublySubstochastic(a));
  EXPECT_FALSE(IsDoublySubstochastic(b));
  Matrix neg(1, 1);
  neg << -0.1;
  try {
    IsDoublySubstochastic(neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNegativeEntry);
  }
}

GTEST_TEST(DoublySubstochasticTest, ForwardAndConverse) {
  Matrix a(2, 2), b(2, 2);
  a << 0.5, 0.5, 0.5, 0.2;
  b << 1, 0, 0.5, 0.5;
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    Vector p = Vec({rng.Uniform(), rng.Uniform()});
    p /= p.sum();
    EXPECT_TRUE(WeakMajorizes(p, a * p));
  }
  EXPECT_FALSE(WeakMajorizationWitness(a).has_value());
  const auto w = WeakMajorizationWitness(b);
  ASSERT_TRUE(w.has_value());
  EXPECT_FALSE(WeakMajorizes(*w, b * *w));
}

Measurement Trine() {
  Measurement m;
  for (int k = 0; k < 3; ++k) {
    const double t = 2 * std::numbers::pi * k / 3;
    m.effects.push_back(EffectVec{2.0 / 3 * QubitState(std::sin(t), 0, std::cos(t))});
  }
  return m;
}

GTEST_TEST(FineGrainedSplitTest, ProjectiveAndTrine) {
  const ModelPtr q = MakeQuantum(2);
  const Vector plus = QubitState(1, 0, 0);
  for (const auto& s : FineGrainedSplit({{EffectVec{plus}, EffectVec{q->unit() - plus}}}, *q)) {
    EXPECT_NEAR(s.scale, 1.0, 1e-12);
  }
  for (const auto& s : FineGrainedSplit(Trine(), *q)) EXPECT_NEAR(s.scale, 2.0 / 3, 1e-12);
}

GTEST_TEST(FineGrainedSplitTest, RejectsCoarseEffect) {
  const ModelPtr c2 = MakeClassical(2);
  try {
    FineGrainedSplit({{EffectVec{Vec({0.5, 0})}, EffectVec{Vec({0.5, 1})}}}, *c2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFineGrained);
  }
}

GTEST_TEST(TransitionMatrixTest, TrineAgainstDiagonalState) {
  const ModelPtr q = MakeQuantum(2);
  Decomposition dec;
  dec.parts = {{0.75, QubitState(0, 0, 1)}, {0.25, QubitState(0, 0, -1)}};
  dec.certified_distinguishable = true;
  const TransitionMatrix tm = BuildTransitionMatrix(Trine(), dec, *q);
  ASSERT_EQ(tm.m.rows(), 3);
  ASSERT_EQ(tm.m.cols(), 2);
  for (int i = 0; i < 3; ++i) {
    const double c = std::cos(2 * std::numbers::pi * i / 3);
    // (2/3)·|<ψ_i|0>|² and (2/3)·|<ψ_i|1>|² with Bloch overlap (1 ± cos θ_i)/2.
    EXPECT_NEAR(tm.m(i, 0), 2.0 / 3 * (1 + c) / 2, 1e-12);
    EXPECT_NEAR(tm.m(i, 1), 2.0 / 3 * (1 - c) / 2, 1e-12);
    EXPECT_LE(tm.m.row(i).sum(), 2.0 / 3 + 1e-12);
  }
  EXPECT_LT(tm.stochastic_error, 1e-12);
  EXPECT_TRUE(IsDoublySubstochastic(tm.m));
}

GTEST_TEST(TransitionMatrixTest, SpectralMeasurementIsIdentity) {
  const ModelPtr q = MakeQuantum(3);
  Rng rng(4);
  const Decomposition dec = Decompose(StateVec{q->SampleState(rng)}, *q);
  const TransitionMatrix tm = BuildTransitionMatrix(SpectralMeasurement(dec, *q), dec, *q);
  const Eigen::Index n = static_cast<Eigen::Index>(dec.parts.size());
  EXPECT_LT((tm.m.topRows(n) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
}

GTEST_TEST(TransitionMatrixTest, ClassicalIsDoublySubstochastic) {
  const ModelPtr c3 = MakeClassical(3);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Decomposition dec = Decompose(StateVec{c3->SampleState(rng)}, *c3);
    const TransitionMatrix tm = BuildTransitionMatrix(SampleFineGrainedMeasurement(*c3, rng), dec, *c3);
    EXPECT_TRUE(IsDoublySubstochastic(tm.m));
  }
}

GTEST_TEST(VerifyTheoremTest, QubitAndBall) {
  const ModelPtr q = MakeQuantum(2);
  const MajorizationReport r = VerifyTheoremMajorization(*q, StateVec{Vec({0.75, 0.25, 0, 0})}, 500, 1);
  EXPECT_EQ(r.trials, 500);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LT(r.max_total_deviation, 1e-10);
  EXPECT_GE(r.worst_margin, -1e-10);
  const ModelPtr b = MakeBall(3);
  EXPECT_EQ(VerifyTheoremMajorization(*b, StateVec{Vec({1, 0, 0, 0.5})}, 200, 2).violations, 0);
}

GTEST_TEST(VerifyTheoremTest, SpectralMeasurementReproducesSpectrum) {
  const ModelPtr q = MakeQuantum(2);
  const Vector rho = Vec({0.75, 0.25, 0, 0});
  const Decomposition dec = Decompose(StateVec{rho}, *q);
  Vector q_out = OutcomeDistribution(SpectralMeasurement(dec, *q), rho);
  std::sort(q_out.data(), q_out.data() + q_out.size(), std::greater<>());
  EXPECT_TRUE(VectorsNear(q_out, Vec({0.75, 0.25}), 1e-12));
}

GTEST_TEST(MeasurementEntropyTest, Values) {
  const ModelPtr q = MakeQuantum(2);
  const auto r = MeasurementEntropy(StateVec{Vec({0.75, 0.25, 0, 0})}, *q, 100, 3);
  EXPECT_NEAR(r.value, ShannonNats({0.75, 0.25}), 1e-12);
  EXPECT_NEAR(r.value, 0.5623, 1e-4);
  EXPECT_GE(r.best_sampled, r.value - 1e-12);
  EXPECT_NEAR(MeasurementEntropy(StateVec{QubitState(1, 0, 0)}, *q, 50, 3).value, 0.0, 1e-12);
  const ModelPtr c3 = MakeClassical(3);
  EXPECT_NEAR(MeasurementEntropy(StateVec{Vector::Constant(3, 1.0 / 3)}, *c3, 50, 3).value, std::log(3.0), 1e-12);
}

GTEST_TEST(GroupAverageTest, TrivialGroup) {
  const ModelPtr q = MakeQuantum(2);
  const Vector rho = Vec({0.75, 0.25, 0, 0});
  const GroupAverageReport r = GroupAverageMajorization(*q, StateVec{rho}, {Matrix::Identity(4, 4)}, {});
  EXPECT_TRUE(VectorsNear(r.mixture, rho, 1e-15));
  EXPECT_TRUE(r.majorized);
  EXPECT_TRUE(VectorsNear(r.mixture_spectrum, r.input_spectrum, 1e-12));
}

GTEST_TEST(GroupAverageTest, QubitConjugates) {
  const ModelPtr q = MakeQuantum(2);
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    const Vector rho = q->SampleState(rng);
    const GroupAverageReport r =
        GroupAverageMajorization(*q, StateVec{rho}, {Matrix::Identity(4, 4), q->SampleReversible(rng)}, {});
    EXPECT_TRUE(r.majorized);
  }
}

GTEST_TEST(GroupAverageTest, AllPermutationsGiveUniform) {
  const ModelPtr c3 = MakeClassical(3);
  std::vector<Matrix> perms;
  std::vector<int> idx = {0, 1, 2};
  do {
    Matrix p = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) p(idx[i], i) = 1.0;
    perms.push_back(p);
  } while (std::next_permutation(idx.begin(), idx.end()));
  const GroupAverageReport r = GroupAverageMajorization(*c3, StateVec{Vec({0.6, 0.3, 0.1})}, perms, {});
  EXPECT_TRUE(VectorsNear(r.mixture, Vector::Constant(3, 1.0 / 3), 1e-15));
  EXPECT_TRUE(r.majorized);
}

GTEST_TEST(GroupAverageTest, BadWeights) {
  const ModelPtr c3 = MakeClassical(3);
  try {
    GroupAverageMajorization(*c3, StateVec{Vec({0.6, 0.3, 0.1})}, {Matrix::Identity(3, 3)}, {0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

}  // namespace
}  // namespace gpt_spectra
