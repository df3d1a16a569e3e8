#include "gpt_spectra/observables.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gpt_spectra/catalog.h"
#include "gpt_spectra/quantum_coords.h"
#include "test_util.h"

namespace gpt_spectra {
namespace {

using test::QubitState;
using test::Vec;
using test::VectorsNear;

GTEST_TEST(SpectralExpandTest, ClassicalWithRepeatedCoefficient) {
  const ModelPtr c4 = MakeClassical(4);
  const SpectralExpansion e = SpectralExpand(Vec({3, 3, 1, 0}), *c4);
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(e.terms[0].coefficient, 3.0);
  EXPECT_TRUE(VectorsNear(e.terms[0].unit, Vec({1, 1, 0, 0}), 0));
  EXPECT_DOUBLE_EQ(e.terms[1].coefficient, 1.0);
  EXPECT_TRUE(VectorsNear(e.terms[1].unit, Vec({0, 0, 1, 0}), 0));
  ASSERT_TRUE(e.zero_term.has_value());
  EXPECT_TRUE(VectorsNear(e.zero_term->unit, Vec({0, 0, 0, 1}), 0));
  // Merged coefficients 3, 1, 0 are distinct.
  EXPECT_TRUE(e.nondegenerate);
  EXPECT_EQ(AllTerms(e).size(), 3u);
}

GTEST_TEST(SpectralExpandTest, PauliZ) {
  const ModelPtr q = MakeQuantum(2);
  const SpectralExpansion e = SpectralExpand(QubitState(0, 0, 1) - QubitState(0, 0, -1), *q);
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_NEAR(e.terms[0].coefficient, 1.0, 1e-12);
  EXPECT_NEAR(e.terms[1].coefficient, -1.0, 1e-12);
  EXPECT_TRUE(VectorsNear(e.terms[0].unit, QubitState(0, 0, 1), 1e-12));
  EXPECT_TRUE(VectorsNear(e.terms[1].unit, QubitState(0, 0, -1), 1e-12));
  EXPECT_FALSE(e.zero_term.has_value());
  EXPECT_TRUE(e.nondegenerate);
}

GTEST_TEST(SpectralExpandTest, BallEffect) {
  // a = (α, β n) has coefficients α ± |β| on the atoms (1, ±n)/2.
  const ModelPtr b = MakeBall(3);
  const SpectralExpansion e = SpectralExpand(Vec({0.2, 0.3, 0, 0.4}), *b);
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_NEAR(e.terms[0].coefficient, 0.7, 1e-12);
  EXPECT_NEAR(e.terms[1].coefficient, -0.3, 1e-12);
  EXPECT_TRUE(VectorsNear(e.terms[0].unit, Vec({0.5, 0.3, 0, 0.4}), 1e-12));
  EXPECT_TRUE(VectorsNear(e.terms[1].unit, Vec({0.5, -0.3, 0, -0.4}), 1e-12));
}

GTEST_TEST(SpectralExpandTest, ReconstructsRandomEffects) {
  Rng rng(8);
  for (const ModelPtr& m : {MakeClassical(4), MakeQuantum(3), MakeBall(3)}) {
    for (int i = 0; i < 10; ++i) {
      Vector a(m->dim());
      for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = rng.Normal();
      const SpectralExpansion e = SpectralExpand(a, *m);
      Vector sum = Vector::Zero(m->dim());
      for (const ExpansionTerm& t : AllTerms(e)) sum += t.coefficient * t.unit;
      EXPECT_TRUE(VectorsNear(sum, a, 1e-10));
      EXPECT_LE(e.orthogonality_violation, 1e-10);
      for (size_t k = 1; k < e.terms.size(); ++k) {
        EXPECT_GT(e.terms[k - 1].coefficient, e.terms[k].coefficient);
      }
    }
  }
}

GTEST_TEST(SpectralExpandTest, UnsupportedModel) {
  try {
    SpectralExpand(Vec({1, 0, 0}), *MakeSquareBit());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModelUnsupported);
  }
}

GTEST_TEST(SpectralFamilyTest, StepFunction) {
  const ModelPtr c4 = MakeClassical(4);
  const SpectralFamily f = MakeSpectralFamily(Vec({3, 3, 1, 0}), *c4);
  ASSERT_EQ(f.thresholds, (std::vector<double>{0, 1, 3}));
  EXPECT_DOUBLE_EQ(f.theta, 1.0);
  EXPECT_TRUE(VectorsNear(f.UnitAt(-0.5), Vector::Zero(4), 0));
  EXPECT_TRUE(VectorsNear(f.UnitAt(0.0), Vec({0, 0, 0, 1}), 0));
  EXPECT_TRUE(VectorsNear(f.UnitAt(2.0), Vec({0, 0, 1, 1}), 0));
  EXPECT_TRUE(VectorsNear(f.UnitAt(3.0), Vector::Ones(4), 0));
  const SpectralFamily single = MakeSpectralFamily(Vec({2, 2}), *MakeClassical(2));
  EXPECT_EQ(single.theta, std::numeric_limits<double>::infinity());
}

GTEST_TEST(UniformGridTest, IncludesEndpoint) {
  const std::vector<double> g = UniformGrid(-1, 1, 0.5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), -1.0);
  EXPECT_DOUBLE_EQ(g[2], 0.0);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
}

GTEST_TEST(RiemannTest, StabilizesBelowTheta) {
  const ModelPtr c4 = MakeClassical(4);
  const Vector a = Vec({3, 3, 1, 0});
  // ‖a‖ is the largest |coefficient|, 3.
  const RiemannReport r = RiemannStabilizationDemo(
      a, *c4, {UniformGrid(-3.5, 3.5, 0.5), UniformGrid(-4, 4, 0.25), UniformGrid(-4, 4, 2)});
  EXPECT_DOUBLE_EQ(r.theta, 1.0);
  EXPECT_DOUBLE_EQ(r.norm, 3.0);
  EXPECT_TRUE(r.stabilized);
  ASSERT_EQ(r.grids.size(), 3u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_TRUE(r.grids[i].finer_than_theta);
    EXPECT_TRUE(r.grids[i].matches_expansion);
    EXPECT_LE(r.grids[i].error, r.grids[i].mesh);
  }
  EXPECT_FALSE(r.grids[2].finer_than_theta);
  // Grid points on every coefficient make the sum exact.
  EXPECT_TRUE(VectorsNear(r.grids[0].riemann_sum, a, 1e-12));
}

GTEST_TEST(RiemannTest, GridOutOfBounds) {
  try {
    RiemannStabilizationDemo(Vec({3, 3, 1, 0}), *MakeClassical(4), {UniformGrid(0, 4, 0.5)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridOutOfBounds);
  }
}

GTEST_TEST(StateExpansionTest, QubitDifference) {
  const ModelPtr q = MakeQuantum(2);
  const PhiMap phi = BuildPhi(*q, SampleAtomicBasis(*q, 1));
  const Vector x = 0.5 * (QubitState(0, 0, 1) - QubitState(0, 0, -1));
  const StateExpansion e = FinegrainedStateExpansion(x, *q, phi);
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_TRUE(e.orthogonal);
  EXPECT_LT(e.reconstruction_error, 1e-10);
  EXPECT_NEAR(e.terms[0].coefficient, 0.5, 1e-12);
  EXPECT_NEAR(e.terms[1].coefficient, -0.5, 1e-12);
  EXPECT_TRUE(VectorsNear(e.terms[0].state, QubitState(0, 0, 1), 1e-10));
  EXPECT_TRUE(FinegrainedStateExpansion(Vector::Zero(4), *q, phi).terms.empty());
}

GTEST_TEST(StateExpansionTest, QutritTermsArePure) {
  const ModelPtr q = MakeQuantum(3);
  const PhiMap phi = BuildPhi(*q, SampleAtomicBasis(*q, 2));
  Rng rng(2);
  const Vector x = q->SampleState(rng) - 0.7 * q->SampleState(rng);
  const StateExpansion e = FinegrainedStateExpansion(x, *q, phi);
  EXPECT_TRUE(e.orthogonal);
  Vector sum = Vector::Zero(q->dim());
  for (const StateTerm& t : e.terms) {
    EXPECT_TRUE(q->IsPure(t.state));
    sum += t.coefficient * t.state;
  }
  EXPECT_TRUE(VectorsNear(sum, x, 1e-9));
}

}  // namespace
}  // namespace gpt_spectra
