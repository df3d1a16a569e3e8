#include "gpt_spectra/perfection.h"

#include <cmath>

#include <gtest/gtest.h>

#include "gpt_spectra/catalog.h"
#include "test_util.h"

namespace gpt_spectra {
namespace {

using test::QubitState;
using test::Vec;

GTEST_TEST(BuildPhiTest, QubitPauliBasisGivesIdentity) {
  // Projector coordinates are orthonormal for tr(XY), so atom and state coincide.
  const ModelPtr q = MakeQuantum(2);
  const PhiMap phi = BuildPhi(
      *q, {QubitState(0, 0, 1), QubitState(0, 0, -1), QubitState(1, 0, 0), QubitState(0, 1, 0)});
  EXPECT_LT((phi.matrix - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  const InnerProductReport ip = CheckInnerProduct(phi);
  EXPECT_TRUE(ip.symmetric);
  EXPECT_TRUE(ip.positive_definite);
  EXPECT_NEAR(ip.min_eigenvalue, 1.0, 1e-12);
}

GTEST_TEST(BuildPhiTest, ClassicalIsIdentity) {
  const ModelPtr c3 = MakeClassical(3);
  const PhiMap phi = BuildPhi(*c3, {Vec({1, 0, 0}), Vec({0, 1, 0}), Vec({0, 0, 1})});
  EXPECT_LT((phi.matrix - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
}

GTEST_TEST(BuildPhiTest, Errors) {
  const ModelPtr c3 = MakeClassical(3);
  try {
    BuildPhi(*c3, {Vec({1, 0, 0}), Vec({1, 0, 0}), Vec({0, 0, 1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotABasis);
  }
  try {
    BuildPhi(*c3, {Vec({1, 1, 0}), Vec({0, 1, 0}), Vec({0, 0, 1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAtomic);
  }
  const ModelPtr sq = MakeSquareBit();
  try {
    BuildPhi(*sq, SampleAtomicBasis(*sq, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotProjective);
  }
}

GTEST_TEST(BuildPhiTest, BallAndBipyramidForms) {
  const ModelPtr b = MakeBall(2);
  EXPECT_TRUE(CheckInnerProduct(BuildPhi(*b, SampleAtomicBasis(*b, 3))).positive_definite);
  const ModelPtr bp = MakeBipyramid();
  const InnerProductReport ip = CheckInnerProduct(BuildPhi(*bp, SampleAtomicBasis(*bp, 3)));
  EXPECT_FALSE(ip.positive_definite);
}

GTEST_TEST(BasisIndependenceTest, SelfDualModels) {
  for (const ModelPtr& m : {MakeClassical(3), MakeQuantum(2), MakeBall(3)}) {
    const BasisIndependenceReport r = CheckBasisIndependence(*m, 4, 5);
    EXPECT_TRUE(r.holds) << r.diagnostic;
    EXPECT_EQ(r.bases, 4);
    EXPECT_LT(r.max_deviation, 1e-9);
  }
}

GTEST_TEST(CompressionSymmetryTest, Qubit) {
  const ModelPtr q = MakeQuantum(2);
  const PhiMap phi = BuildPhi(*q, SampleAtomicBasis(*q, 2));
  const std::vector<Matrix> filters = FiltersUnderPhi(phi, *q, 10, 2);
  ASSERT_FALSE(filters.empty());
  const CompressionSymmetryReport r = CheckCompressionSymmetry(phi, *q, filters, 200, 2);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.triples, 200);
  EXPECT_LT(r.max_asymmetry, 1e-9);
}

GTEST_TEST(CheckPerfectionTest, ClassicalAndQuantum) {
  for (const ModelPtr& m : {MakeClassical(3), MakeQuantum(2)}) {
    const PhiMap phi = BuildPhi(*m, SampleAtomicBasis(*m, 7));
    const SelfDualityReport r = CheckPerfection(*m, phi, 50, 7);
    EXPECT_TRUE(r.positive_definite);
    EXPECT_TRUE(r.cone_self_dual);
    EXPECT_TRUE(r.perfect) << r.note;
  }
}

GTEST_TEST(OrthotracialTest, Dimensions) {
  const ModelPtr q = MakeQuantum(2);
  const OrthotracialReport rq = OrthotracialSubspace(*q, BuildPhi(*q, SampleAtomicBasis(*q, 1)), 50, 1);
  EXPECT_EQ(rq.dimension, 1);
  EXPECT_TRUE(rq.contains_unit);
  // Coordinate faces F and F′ of a simplex have P_F + P_F′ = I.
  for (int n = 2; n <= 4; ++n) {
    const ModelPtr c = MakeClassical(n);
    const OrthotracialReport rc = OrthotracialSubspace(*c, BuildPhi(*c, SampleAtomicBasis(*c, 1)), 50, 1);
    EXPECT_EQ(rc.dimension, n);
    EXPECT_TRUE(rc.contains_unit);
  }
}

GTEST_TEST(ForcedOrderIsomorphismsTest, SquareHasNoPositiveSymmetricOne) {
  const auto isos = ForcedOrderIsomorphisms(*MakeSquareBit());
  EXPECT_EQ(isos.size(), 8u);
  int symmetric = 0;
  for (const OrderIsomorphism& iso : isos) {
    if (!iso.symmetric) continue;
    ++symmetric;
    EXPECT_LT(iso.min_eigenvalue, 0.0);
  }
  EXPECT_GT(symmetric, 0);
}

GTEST_TEST(ForcedOrderIsomorphismsTest, ClassicalIncludesIdentity) {
  const auto isos = ForcedOrderIsomorphisms(*MakeClassical(3));
  EXPECT_EQ(isos.size(), 6u);
  bool identity = false;
  for (const OrderIsomorphism& iso : isos) {
    if ((iso.matrix - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12) {
      identity = true;
      EXPECT_TRUE(iso.symmetric);
      EXPECT_NEAR(iso.min_eigenvalue, 1.0, 1e-12);
    }
  }
  EXPECT_TRUE(identity);
}

}  // namespace
}  // namespace gpt_spectra
