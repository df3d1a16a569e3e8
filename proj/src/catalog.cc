#include "gpt_spectra/catalog.h"

#include <cmath>

#include "models/ball_model.h"
#include "models/classical_model.h"
#include "models/planar_model.h"
#include "models/polytope_model.h"
#include "models/quantum_model.h"

namespace gpt_spectra {

using internal::PolytopeModel;

ModelPtr MakeClassical(int n) { return std::make_shared<internal::ClassicalModel>(n); }

ModelPtr MakeQuantum(int d) { return std::make_shared<internal::QuantumModel>(d); }

ModelPtr MakeBall(int k) { return std::make_shared<internal::BallModel>(k); }

ModelPtr MakeSquareBit() {
  std::vector<Vector> v = {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, 1),
                           Eigen::Vector3d(1, -1, -1), Eigen::Vector3d(1, 1, -1)};
  return std::make_shared<PolytopeModel>(ModelKind::kSquareBit, v, nlohmann::json::object());
}

ModelPtr MakeBipyramid() {
  std::vector<Vector> v;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * M_PI * k / 3.0;
    v.push_back(Eigen::Vector4d(1, std::cos(t), std::sin(t), 0));
  }
  v.push_back(Eigen::Vector4d(1, 0, 0, 1));
  v.push_back(Eigen::Vector4d(1, 0, 0, -1));
  return std::make_shared<PolytopeModel>(ModelKind::kBipyramid, v, nlohmann::json::object());
}

ModelPtr MakeEllipse(double a, double b, int chord_grid) {
  return std::make_shared<internal::EllipseModel>(a, b, chord_grid);
}

ModelPtr MakePuffedTriangle(double eps3, double eps2, int chord_grid) {
  return std::make_shared<internal::PuffedTriangleModel>(eps3, eps2, chord_grid);
}

ModelPtr MakePolyhedral(const std::vector<Vector>& vertices) {
  nlohmann::json verts = nlohmann::json::array();
  for (const Vector& v : vertices) verts.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return std::make_shared<PolytopeModel>(ModelKind::kPolyhedral, vertices,
                                         nlohmann::json{{"vertices", verts}});
}

namespace {

template <typename T>
T Get(const nlohmann::json& config, const char* key, std::optional<T> fallback = std::nullopt) {
  if (!config.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::kConfig, std::string("missing parameter \"") + key + "\"");
  }
  try {
    return config.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kConfig, std::string("parameter \"") + key + "\" has the wrong type");
  }
}

std::vector<Vector> ReadPoints(const nlohmann::json& list, bool homogenize) {
  if (!list.is_array() || list.empty()) throw Error(ErrorCode::kConfig, "vertex list is empty");
  std::vector<Vector> out;
  for (const auto& p : list) {
    std::vector<double> coords;
    try {
      coords = p.get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kConfig, "vertices must be arrays of numbers");
    }
    Vector v(coords.size() + (homogenize ? 1 : 0));
    int k = 0;
    if (homogenize) v(k++) = 1.0;
    for (double c : coords) v(k++) = c;
    out.push_back(v);
  }
  return out;
}

}  // namespace

ModelPtr MakeModel(const nlohmann::json& config) {
  if (!config.is_object()) throw Error(ErrorCode::kConfig, "model config must be an object");
  const std::string name = Get<std::string>(config, "model");
  if (name == "classical") return MakeClassical(Get<int>(config, "n"));
  if (name == "quantum") return MakeQuantum(Get<int>(config, "d"));
  if (name == "ball") return MakeBall(Get<int>(config, "k"));
  if (name == "square_bit") return MakeSquareBit();
  if (name == "bipyramid") return MakeBipyramid();
  if (name == "ellipse") {
    return MakeEllipse(Get<double>(config, "a"), Get<double>(config, "b"),
                       Get<int>(config, "chord_grid", 10000));
  }
  if (name == "puffed_triangle") {
    return MakePuffedTriangle(Get<double>(config, "eps3", 0.09), Get<double>(config, "eps2", 0.05),
                              Get<int>(config, "chord_grid", 10000));
  }
  if (name == "polyhedral") {
    if (config.contains("vertices")) return MakePolyhedral(ReadPoints(config["vertices"], false));
    if (config.contains("points")) return MakePolyhedral(ReadPoints(config["points"], true));
    throw Error(ErrorCode::kConfig, "polyhedral model needs \"vertices\" or \"points\"");
  }
  throw Error(ErrorCode::kConfig, "unknown model \"" + name + "\"");
}

}  // namespace gpt_spectra
