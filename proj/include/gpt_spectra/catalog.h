#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "gpt_spectra/system_model.h"

namespace gpt_spectra {

/// The simplex with n vertices (n ≥ 1).
ModelPtr MakeClassical(int n);
/// d×d density matrices (d ≥ 2), dimension d².
ModelPtr MakeQuantum(int d);
/// The unit ball in Rᵏ (k ≥ 2) over the Lorentz cone, dimension k+1.
ModelPtr MakeBall(int k);
/// The square with vertices (±1, ±1).
ModelPtr MakeSquareBit();
/// Equilateral triangle of circumradius 1 in the z = 0 plane joined to the
/// poles (0, 0, ±1).
ModelPtr MakeBipyramid();
/// Filled ellipse x²/a² + y²/b² ≤ 1; throws kInvalidAxis unless a, b > 0.
/// `chord_grid` sets the boundary resolution of chord enumeration.
ModelPtr MakeEllipse(double a, double b, int chord_grid = 10000);
/// Strictly convex oval with support function 1 + ε₃ cos 3θ + ε₂ cos 2θ.
ModelPtr MakePuffedTriangle(double eps3 = 0.09, double eps2 = 0.05, int chord_grid = 10000);
/// conv(vertices); each vertex is homogenized with a leading 1.
ModelPtr MakePolyhedral(const std::vector<Vector>& vertices);

/// Builds a model from a config block such as {"model": "quantum", "d": 3}.
/// Polyhedral models take {"model": "polyhedral", "vertices": [[1, x, y], …]}
/// (homogenized) or "points": [[x, y], …] (a leading 1 is added).
/// Throws kConfig on unknown names or missing parameters.
ModelPtr MakeModel(const nlohmann::json& config);

}  // namespace gpt_spectra
