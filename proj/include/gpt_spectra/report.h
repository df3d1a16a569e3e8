#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "gpt_spectra/types.h"

namespace gpt_spectra {

inline constexpr int kSchemaVersion = 1;

/// %.17g; non-finite values have no JSON form and are written as null.
std::string FormatDouble(double x);

/// Pretty-printed JSON with every floating-point number written by
/// FormatDouble, keys in sorted order and a trailing newline.
std::string DumpJson(const nlohmann::json& j);

/// "path,value" rows for every scalar leaf, paths joined with '.'.
std::string DumpCsv(const nlohmann::json& j);

nlohmann::json ToJson(const Vector& v);
/// Row-major nested arrays.
nlohmann::json ToJson(const Matrix& m);

/// Accepts a plain array of numbers or an object with a "coords" array.
/// Throws kConfig otherwise.
Vector VectorFromJson(const nlohmann::json& j);

}  // namespace gpt_spectra
