#include "gpt_spectra/catalog.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "gpt_spectra/core.h"
#include "gpt_spectra/spectral.h"
#include "test_util.h"

namespace gpt_spectra {
namespace {

using test::QubitState;
using test::Vec;
using test::VectorsNear;

std::vector<double> SortedProbabilities(const std::vector<WeightedState>& parts) {
  std::vector<double> p;
  for (const auto& w : parts) p.push_back(w.probability);
  std::sort(p.rbegin(), p.rend());
  return p;
}

GTEST_TEST(ClassicalTest, SingleOutcome) {
  const ModelPtr c1 = MakeClassical(1);
  EXPECT_EQ(c1->dim(), 1);
  EXPECT_EQ(SpectralEntropy(StateVec{Vec({1})}, *c1), 0.0);
}

GTEST_TEST(ClassicalTest, DecomposeReadsCoordinates) {
  const ModelPtr c2 = MakeClassical(2);
  const auto parts = c2->Decompose(Vec({0.7, 0.3}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_DOUBLE_EQ(parts[0].probability, 0.7);
  EXPECT_TRUE(VectorsNear(parts[0].state, Vec({1, 0}), 0));
  EXPECT_DOUBLE_EQ(parts[1].probability, 0.3);
  EXPECT_TRUE(VectorsNear(parts[1].state, Vec({0, 1}), 0));
  const ModelPtr c3 = MakeClassical(3);
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{Vector::Constant(3, 1.0 / 3)}, *c3).probs,
                          Vector::Constant(3, 1.0 / 3), 1e-15));
}

GTEST_TEST(QuantumTest, SpectrumOfDiagonalAndPure) {
  const ModelPtr q = MakeQuantum(2);
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{Vec({0.75, 0.25, 0, 0})}, *q).probs,
                          Vec({0.75, 0.25}), 1e-12));
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{QubitState(0.6, 0, 0.8)}, *q).probs,
                          Vec({1, 0}), 1e-12));
}

GTEST_TEST(QuantumTest, RankTwoFilterIsIdempotent) {
  const ModelPtr q = MakeQuantum(3);
  ComplexMatrix proj = ComplexMatrix::Zero(3, 3);
  proj(0, 0) = proj(1, 1) = 1.0;
  const Face face = q->FaceOf(HermitianToCoords(proj));
  EXPECT_EQ(face.rank(), 4);
  const FilterMaps f = q->FiltersFor(face, nullptr);
  EXPECT_LT((f.map * f.map - f.map).cwiseAbs().maxCoeff(), 1e-12);
  const Matrix qxq = SuperoperatorMatrix([&](const ComplexMatrix& x) { return proj * x * proj; }, 3);
  EXPECT_LT((f.map - qxq).cwiseAbs().maxCoeff(), 1e-12);
}

GTEST_TEST(BallTest, Decompositions) {
  const ModelPtr b = MakeBall(3);
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{Vec({1, 0, 0, 0.5})}, *b).probs,
                          Vec({0.75, 0.25}), 1e-12));
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{Vec({1, 0.6, 0, 0.8})}, *b).probs,
                          Vec({1, 0}), 1e-12));
  // Center: the tie-break uses the first axis.
  const auto parts = b->Decompose(Vec({1, 0, 0, 0}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_DOUBLE_EQ(parts[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(parts[1].probability, 0.5);
  EXPECT_TRUE(VectorsNear(parts[0].state + parts[1].state, Vec({2, 0, 0, 0}), 1e-15));
  EXPECT_NEAR(std::abs(parts[0].state(1)), 1.0, 1e-15);
}

GTEST_TEST(BallTest, TwoDimensionalExample) {
  const ModelPtr b = MakeBall(2);
  const auto parts = b->Decompose(Vec({1, 0.6, 0}));
  ASSERT_EQ(parts.size(), 2u);
  const auto& hi = parts[0].probability > parts[1].probability ? parts[0] : parts[1];
  const auto& lo = parts[0].probability > parts[1].probability ? parts[1] : parts[0];
  EXPECT_NEAR(hi.probability, 0.8, 1e-15);
  EXPECT_NEAR(lo.probability, 0.2, 1e-15);
  EXPECT_TRUE(VectorsNear(hi.state, Vec({1, 1, 0}), 1e-15));
  EXPECT_TRUE(VectorsNear(lo.state, Vec({1, -1, 0}), 1e-15));
}

GTEST_TEST(SquareBitTest, VerticesAndCenter) {
  const ModelPtr sq = MakeSquareBit();
  const auto cone = sq->ExactCone();
  ASSERT_TRUE(cone.has_value());
  EXPECT_EQ(cone->rays.size(), 4u);
  for (const Vector& v : cone->rays) {
    EXPECT_TRUE(sq->IsPure(v));
    EXPECT_DOUBLE_EQ(std::abs(v(1)), 1.0);
    EXPECT_DOUBLE_EQ(std::abs(v(2)), 1.0);
  }
  const auto decs = sq->EnumerateDecompositions(Vec({1, 0, 0}));
  EXPECT_EQ(decs.size(), 2u);
  for (const auto& d : decs) {
    EXPECT_EQ(SortedProbabilities(d), (std::vector<double>{0.5, 0.5}));
  }
}

GTEST_TEST(BipyramidTest, BarycenterHasTwoSpectra) {
  const ModelPtr bp = MakeBipyramid();
  bool three = false, two = false;
  for (const auto& d : bp->EnumerateDecompositions(bp->CenterState())) {
    const auto p = SortedProbabilities(d);
    if (p.size() == 3 && std::abs(p[0] - 1.0 / 3) < 1e-12 && std::abs(p[2] - 1.0 / 3) < 1e-12) {
      three = true;
    }
    if (p.size() == 2 && std::abs(p[0] - 0.5) < 1e-12 && std::abs(p[1] - 0.5) < 1e-12) two = true;
  }
  EXPECT_TRUE(three);
  EXPECT_TRUE(two);
}

GTEST_TEST(BipyramidTest, TriangleMeasurementIsValid) {
  const ModelPtr bp = MakeBipyramid();
  Measurement m;
  std::vector<Vector> equator;
  const auto cone = bp->ExactCone();
  for (const Vector& v : cone->rays) {
    if (std::abs(v(3)) < 1e-12) equator.push_back(v);
  }
  ASSERT_EQ(equator.size(), 3u);
  // f_i = 1/3 + (2/3) v_i·(x, y): 1 on v_i, 0 on the other two, 1/3 on the poles.
  for (const Vector& v : equator) m.effects.push_back(EffectVec{Vec({1.0 / 3, 2.0 / 3 * v(1), 2.0 / 3 * v(2), 0})});
  EXPECT_TRUE(IsValidMeasurement(m, *bp).valid);
  for (size_t i = 0; i < 3; ++i) {
    for (size_t j = 0; j < 3; ++j) EXPECT_NEAR(m.effects[i].coords.dot(equator[j]), i == j, 1e-12);
    EXPECT_NEAR(m.effects[i].coords.dot(Vec({1, 0, 0, 1})), 1.0 / 3, 1e-12);
  }
}

GTEST_TEST(EllipseTest, InvalidAxis) {
  try {
    MakeEllipse(0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidAxis);
  }
}

GTEST_TEST(EllipseTest, CircleMatchesBall) {
  const ModelPtr circle = MakeEllipse(1, 1);
  const ModelPtr b = MakeBall(2);
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Vector s = b->SampleState(rng);
    EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{s}, *circle).probs,
                            ComputeSpectrum(StateVec{s}, *b).probs, 1e-9));
  }
}

GTEST_TEST(EllipseTest, CenterDecompositionsAreEven) {
  const ModelPtr e = MakeEllipse(2, 1);
  const auto decs = e->EnumerateDecompositions(e->CenterState());
  ASSERT_FALSE(decs.empty());
  for (const auto& d : decs) {
    const auto p = SortedProbabilities(d);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p[0], 0.5, 1e-9);
  }
}

GTEST_TEST(CatalogTest, DecompositionsArePureAndDistinguishable) {
  Rng rng(5);
  for (const ModelPtr& m : {MakeClassical(4), MakeQuantum(3), MakeBall(3), MakeEllipse(2, 1),
                            MakePuffedTriangle()}) {
    for (int i = 0; i < 5; ++i) {
      const Vector s = m->SampleState(rng);
      const auto parts = m->Decompose(s);
      double total = 0.0;
      Vector sum = Vector::Zero(m->dim());
      std::vector<Vector> states;
      for (const auto& w : parts) {
        EXPECT_GE(w.probability, 0.0);
        EXPECT_TRUE(m->IsPure(w.state));
        total += w.probability;
        sum += w.probability * w.state;
        states.push_back(w.state);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      EXPECT_TRUE(VectorsNear(sum, s, 1e-9));
      EXPECT_TRUE(PerfectlyDistinguishable(states, *m).has_value());
    }
  }
}

GTEST_TEST(MakeModelTest, ConfigBlocks) {
  EXPECT_EQ(MakeModel({{"model", "quantum"}, {"d", 3}})->dim(), 9);
  EXPECT_EQ(MakeModel({{"model", "polyhedral"}, {"points", {{0, 0}, {1, 0}, {0, 1}}}})->dim(), 3);
  for (const nlohmann::json& bad : {nlohmann::json{{"model", "nope"}}, nlohmann::json{{"model", "classical"}},
                                    nlohmann::json{{"model", "polyhedral"}}}) {
    try {
      MakeModel(bad);
      FAIL() << bad.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfig);
    }
  }
}

}  // namespace
}  // namespace gpt_spectra
