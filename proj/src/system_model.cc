#include "gpt_spectra/system_model.h"

#include "gpt_spectra/linalg.h"

namespace gpt_spectra {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kLpNumericalFailure: return "LPNumericalFailure";
    case ErrorCode::kNotAState: return "NotAState";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidAxis: return "InvalidAxis";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kSingularInnerProduct: return "SingularInnerProduct";
    case ErrorCode::kNotInCone: return "NotInCone";
    case ErrorCode::kDecompositionUnavailable: return "DecompositionUnavailable";
    case ErrorCode::kAsymmetricFunction: return "AsymmetricFunction";
    case ErrorCode::kEnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kNotFineGrained: return "NotFineGrained";
    case ErrorCode::kNotProjective: return "NotProjective";
    case ErrorCode::kNotAtomic: return "NotAtomic";
    case ErrorCode::kNotPure: return "NotPure";
    case ErrorCode::kLatticeTooLarge: return "LatticeTooLarge";
    case ErrorCode::kNotABasis: return "NotABasis";
    case ErrorCode::kModelUnsupported: return "ModelUnsupported";
    case ErrorCode::kGridOutOfBounds: return "GridOutOfBounds";
    case ErrorCode::kFiltersIncomplete: return "FiltersIncomplete";
    case ErrorCode::kNoReversibleMap: return "NoReversibleMap";
    case ErrorCode::kZeroWeightBranch: return "ZeroWeightBranch";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kClassical: return "classical";
    case ModelKind::kQuantum: return "quantum";
    case ModelKind::kBall: return "ball";
    case ModelKind::kSquareBit: return "square_bit";
    case ModelKind::kBipyramid: return "bipyramid";
    case ModelKind::kEllipse: return "ellipse";
    case ModelKind::kPolyhedral: return "polyhedral";
    case ModelKind::kPuffedTriangle: return "puffed_triangle";
  }
  return "unknown";
}

Vector SystemModel::RelativeInteriorPoint(const Matrix& basis) const {
  if (basis.cols() == 0) return Vector::Zero(dim_);
  return basis * (basis.transpose() * CenterState());
}

std::vector<ExpansionTerm> SystemModel::SpectralTerms(const Vector& a, double merge_tol) const {
  (void)a;
  (void)merge_tol;
  throw Error(ErrorCode::kModelUnsupported,
              "no spectral expansion for model " + ModelKindName(kind()));
}

std::vector<Vector> SystemModel::AtomicRefinement(const Vector& unit) const {
  (void)unit;
  throw Error(ErrorCode::kModelUnsupported,
              "no atomic refinement for model " + ModelKindName(kind()));
}

void SystemModel::CheckDim(const Vector& x, const char* what) const {
  if (x.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has length " + std::to_string(x.size()) +
                    ", expected " + std::to_string(dim_));
  }
}

}  // namespace gpt_spectra
