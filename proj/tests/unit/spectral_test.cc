#include "gpt_spectra/spectral.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "gpt_spectra/catalog.h"
#include "gpt_spectra/majorization.h"
#include "test_util.h"

namespace gpt_spectra {
namespace {

using test::QubitState;
using test::ShannonNats;
using test::Vec;
using test::VectorsNear;

GTEST_TEST(DecomposeTest, QutritDiagonal) {
  const ModelPtr q = MakeQuantum(3);
  const Decomposition dec = Decompose(StateVec{Vec({0.5, 0.3, 0.2, 0, 0, 0, 0, 0, 0})}, *q);
  EXPECT_TRUE(dec.certified_distinguishable);
  std::vector<double> p;
  for (const auto& w : dec.parts) p.push_back(w.probability);
  std::sort(p.rbegin(), p.rend());
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.3, 1e-12);
  EXPECT_NEAR(p[2], 0.2, 1e-12);
}

GTEST_TEST(DecomposeTest, PureStateIsOnePart) {
  Rng rng(1);
  for (const ModelPtr& m : {MakeClassical(3), MakeQuantum(2), MakeBall(3), MakeSquareBit(), MakeEllipse(2, 1)}) {
    const Vector pure = m->SamplePure(rng);
    const Decomposition dec = Decompose(StateVec{pure}, *m);
    ASSERT_EQ(dec.parts.size(), 1u);
    EXPECT_NEAR(dec.parts[0].probability, 1.0, 1e-12);
    EXPECT_TRUE(VectorsNear(dec.parts[0].state, pure, 1e-9));
  }
}

GTEST_TEST(SpectrumTest, SortedAndPadded) {
  const ModelPtr c4 = MakeClassical(4);
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{Vec({0.1, 0.4, 0.2, 0.3})}, *c4).probs,
                          Vec({0.4, 0.3, 0.2, 0.1}), 0));
  const ModelPtr q = MakeQuantum(2);
  EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{Vec({0.5, 0.5, 0, 0})}, *q).probs, Vec({0.5, 0.5}), 1e-12));
  const ModelPtr c3 = MakeClassical(3);
  const Spectrum s = ComputeSpectrum(StateVec{Vec({0, 1, 0})}, *c3);
  EXPECT_EQ(s.n_max, 3);
  EXPECT_TRUE(VectorsNear(s.probs, Vec({1, 0, 0}), 0));
}

GTEST_TEST(SpectralEntropyTest, Values) {
  const ModelPtr q = MakeQuantum(2);
  EXPECT_NEAR(SpectralEntropy(StateVec{QubitState(0, 0.6, 0.8)}, *q), 0.0, 1e-12);
  const double s = SpectralEntropy(StateVec{Vec({0.75, 0.25, 0, 0})}, *q);
  EXPECT_NEAR(s, ShannonNats({0.75, 0.25}), 1e-12);
  EXPECT_NEAR(s, 0.5623, 1e-4);
  EXPECT_NEAR(SpectralEntropy(StateVec{Vec({0.75, 0.25, 0, 0})}, *q, LogBase::kTwo), s / std::log(2.0), 1e-12);
  for (int n = 2; n <= 5; ++n) {
    EXPECT_NEAR(SpectralEntropy(StateVec{Vector::Constant(n, 1.0 / n)}, *MakeClassical(n)), std::log(n), 1e-12);
  }
}

GTEST_TEST(SchurFunctionalTest, Examples) {
  const ModelPtr q = MakeQuantum(2);
  const StateVec rho{Vec({0.75, 0.25, 0, 0})};
  EXPECT_NEAR(SchurFunctional(rho, *q, [](const Vector& p) { return p.maxCoeff(); }).value, 0.75, 1e-12);
  Rng rng(3);
  const ModelPtr b = MakeBall(3);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(SchurFunctional(StateVec{b->SampleState(rng)}, *b, [](const Vector& p) { return p.sum(); }).value,
                1.0, 1e-12);
  }
  const ModelPtr c4 = MakeClassical(4);
  const double renyi2 = SchurFunctional(StateVec{Vector::Constant(4, 0.25)}, *c4, [](const Vector& p) {
                          return -std::log(p.squaredNorm());
                        }).value;
  EXPECT_NEAR(renyi2, std::log(4.0), 1e-12);
}

GTEST_TEST(SchurFunctionalTest, RejectsAsymmetricFunction) {
  const ModelPtr c3 = MakeClassical(3);
  try {
    SchurFunctional(StateVec{Vec({0.5, 0.3, 0.2})}, *c3, [](const Vector& p) { return p(0); });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAsymmetricFunction);
  }
}

GTEST_TEST(SchurFunctionalTest, FlagsAmbiguousSpectra) {
  const ModelPtr bp = MakeBipyramid();
  EXPECT_TRUE(SchurFunctional(StateVec{bp->CenterState()}, *bp, [](const Vector& p) { return p.maxCoeff(); })
                  .ambiguous);
}

GTEST_TEST(AxiomSTest, ClassicalHoldsBipyramidFails) {
  EXPECT_TRUE(CheckAxiomS(*MakeClassical(4), 30, 1).holds);
  const AxiomSReport r = CheckAxiomS(*MakeBipyramid(), 10, 1);
  EXPECT_FALSE(r.holds);
  ASSERT_TRUE(r.witness.has_value());
  const Vector third = Vec({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const Vector half = Vec({0.5, 0.5, 0});
  const bool matches = (VectorsNear(r.witness->first, third, 1e-12) && VectorsNear(r.witness->second, half, 1e-12)) ||
                       (VectorsNear(r.witness->first, half, 1e-12) && VectorsNear(r.witness->second, third, 1e-12));
  EXPECT_TRUE(matches);
}

GTEST_TEST(AxiomWSTest, SmoothAndPolyhedral) {
  EXPECT_TRUE(CheckAxiomWS(*MakeQuantum(2), 20, 2).holds);
  // Interior points of the square off both diagonals have no two-point decomposition.
  EXPECT_FALSE(CheckAxiomWS(*MakeSquareBit(), 20, 2).holds);
}

GTEST_TEST(SpectrumTest, InvariantUnderReversibleMaps) {
  Rng rng(9);
  for (const ModelPtr& m : {MakeClassical(4), MakeQuantum(3), MakeBall(3)}) {
    for (int i = 0; i < 10; ++i) {
      const Vector s = m->SampleState(rng);
      const Matrix t = m->SampleReversible(rng);
      EXPECT_TRUE(VectorsNear(ComputeSpectrum(StateVec{t * s}, *m).probs, ComputeSpectrum(StateVec{s}, *m).probs, 1e-9));
    }
  }
}

GTEST_TEST(SpectralEntropyTest, SchurConcave) {
  const ModelPtr c4 = MakeClassical(4);
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const Vector a = c4->SampleState(rng), b = c4->SampleState(rng);
    const Vector sa = ComputeSpectrum(StateVec{a}, *c4).probs, sb = ComputeSpectrum(StateVec{b}, *c4).probs;
    if (Majorizes(sa, sb)) {
      EXPECT_GE(EntropyOf(sb) + 1e-12, EntropyOf(sa));
    }
  }
}

}  // namespace
}  // namespace gpt_spectra
