#include "gpt_spectra/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gpt_spectra/errors.h"

namespace gpt_spectra {
namespace {

void Indent(std::ostream& os, int level) {
  for (int i = 0; i < level; ++i) os << "  ";
}

void Write(std::ostream& os, const nlohmann::json& j, int level) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        Indent(os, level + 1);
        os << nlohmann::json(key).dump() << ": ";
        Write(os, value, level + 1);
      }
      os << "\n";
      Indent(os, level);
      os << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      if (scalars) {
        os << "[";
        for (size_t i = 0; i < j.size(); ++i) {
          if (i > 0) os << ", ";
          Write(os, j[i], level + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ",\n";
        Indent(os, level + 1);
        Write(os, j[i], level + 1);
      }
      os << "\n";
      Indent(os, level);
      os << "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      os << FormatDouble(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

void Flatten(const nlohmann::json& j, const std::string& path, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      Flatten(value, path.empty() ? key : path + "." + key, os);
    }
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) Flatten(j[i], path + "." + std::to_string(i), os);
  } else {
    os << path << ",";
    os << (j.is_number_float() ? FormatDouble(j.get<double>()) : j.dump());
    os << "\n";
  }
}

}  // namespace

std::string FormatDouble(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string DumpJson(const nlohmann::json& j) {
  std::ostringstream os;
  Write(os, j, 0);
  os << "\n";
  return os.str();
}

std::string DumpCsv(const nlohmann::json& j) {
  std::ostringstream os;
  os << "path,value\n";
  Flatten(j, "", os);
  return os.str();
}

nlohmann::json ToJson(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::json ToJson(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(ToJson(Vector(m.row(i).transpose())));
  return rows;
}

Vector VectorFromJson(const nlohmann::json& j) {
  const nlohmann::json& list = j.is_object() && j.contains("coords") ? j["coords"] : j;
  if (!list.is_array() || list.empty()) {
    throw Error(ErrorCode::kConfig, "expected an array of coordinates or an object with \"coords\"");
  }
  Vector v(static_cast<Eigen::Index>(list.size()));
  for (size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_number()) throw Error(ErrorCode::kConfig, "coordinates must be numbers");
    v(static_cast<Eigen::Index>(i)) = list[i].get<double>();
  }
  return v;
}

}  // namespace gpt_spectra
