#include "prhpg/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace prhpg {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M) {
  json data = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back(M(i, j));
  }
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw std::invalid_argument(where + ": expected {rows, cols, data}");
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 ||
      data.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument(where + ": data length mismatch");
  }
  Eigen::MatrixXd M(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
      M(i, j2) = data.at(idx++).get<double>();
    }
  }
  return M;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json basis_to_json(const WeightingBasis& basis) {
  const UnivariateFamily::Kind kind = basis.family(0).kind();
  for (int k = 1; k < basis.dim(); ++k) {
    if (basis.family(k).kind() != kind) {
      throw std::invalid_argument(
          "model_to_json: mixed basis kinds are not serializable");
    }
  }
  switch (kind) {
    case UnivariateFamily::Kind::kConstant:
      return json{{"kind", "constant"}};
    case UnivariateFamily::Kind::kHat: {
      json knots = json::array();
      for (int k = 0; k < basis.dim(); ++k) {
        knots.push_back(vector_to_json(basis.family(k).grid()));
      }
      return json{{"kind", "hat"}, {"knots", knots}};
    }
    case UnivariateFamily::Kind::kInterpolated: {
      json grids = json::array();
      json rows = json::array();
      for (int k = 0; k < basis.dim(); ++k) {
        grids.push_back(vector_to_json(basis.family(k).grid()));
        rows.push_back(matrix_to_json(basis.family(k).rows()));
      }
      return json{{"kind", "interpolated"}, {"grids", grids}, {"rows", rows}};
    }
  }
  throw std::logic_error("unreachable basis kind");
}

WeightingBasis basis_from_json(const json& j, int d) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("basis: expected {kind, ...}");
  }
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<UnivariateFamily> families;
  if (kind == "constant") {
    for (int k = 0; k < d; ++k) families.push_back(UnivariateFamily::constant());
  } else if (kind == "hat") {
    const auto& knots = j.at("knots");
    if (!knots.is_array() || static_cast<int>(knots.size()) != d) {
      throw std::invalid_argument("basis.knots: need one knot list per dimension");
    }
    for (int k = 0; k < d; ++k) {
      families.push_back(
          UnivariateFamily::hat(vector_from_json(knots.at(k), "basis.knots")));
    }
  } else if (kind == "interpolated") {
    const auto& grids = j.at("grids");
    const auto& rows = j.at("rows");
    if (!grids.is_array() || !rows.is_array() ||
        static_cast<int>(grids.size()) != d ||
        static_cast<int>(rows.size()) != d) {
      throw std::invalid_argument(
          "basis.grids/rows: need one entry per dimension");
    }
    for (int k = 0; k < d; ++k) {
      families.push_back(UnivariateFamily::interpolated(
          vector_from_json(grids.at(k), "basis.grids"),
          matrix_from_json(rows.at(k), "basis.rows")));
    }
  } else {
    throw std::invalid_argument("basis.kind: unknown kind '" + kind + "'");
  }
  return WeightingBasis(std::move(families));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

}  // namespace

std::string model_to_json(const PolytopicModel& model) {
  json vertices = json::array();
  for (const auto& v : model.vertices()) {
    vertices.push_back(json{{"A", matrix_to_json(v.A)},
                            {"B", matrix_to_json(v.B)}});
  }
  const json doc{{"n", model.state_dim()},
                 {"m", model.input_dim()},
                 {"d", model.domain().dim()},
                 {"lo", vector_to_json(model.domain().lo())},
                 {"hi", vector_to_json(model.domain().hi())},
                 {"basis", basis_to_json(model.basis())},
                 {"vertices", vertices}};
  return doc.dump(2) + "\n";
}

PolytopicModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("model JSON parse error: ") +
                                err.what());
  }
  for (const char* key : {"n", "m", "d", "lo", "hi", "basis", "vertices"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("model JSON: missing key '") +
                                  key + "'");
    }
  }
  const int n = doc.at("n").get<int>();
  const int m = doc.at("m").get<int>();
  const int d = doc.at("d").get<int>();
  ParameterDomain domain(vector_from_json(doc.at("lo"), "lo"),
                         vector_from_json(doc.at("hi"), "hi"));
  if (domain.dim() != d) {
    throw std::invalid_argument("model JSON: d does not match lo/hi length");
  }
  WeightingBasis basis = basis_from_json(doc.at("basis"), d);
  std::vector<VertexSystem> vertices;
  for (std::size_t i = 0; i < doc.at("vertices").size(); ++i) {
    const auto& v = doc.at("vertices").at(i);
    VertexSystem vs{matrix_from_json(v.at("A"), "vertices.A"),
                    matrix_from_json(v.at("B"), "vertices.B")};
    if (vs.A.rows() != n || vs.A.cols() != n || vs.B.rows() != n ||
        vs.B.cols() != m) {
      throw std::invalid_argument("model JSON: vertex shape mismatch");
    }
    vertices.push_back(std::move(vs));
  }
  return PolytopicModel(std::move(domain), std::move(basis),
                        std::move(vertices));
}

void save_model(const std::string& path, const PolytopicModel& model) {
  write_file(path, model_to_json(model));
}

PolytopicModel load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

std::string gains_to_json(const StageGains& gains) {
  if (gains.K.empty()) {
    throw std::invalid_argument("gains_to_json: empty gains");
  }
  json list = json::array();
  for (const auto& K : gains.K) list.push_back(matrix_to_json(K));
  const json doc{{"m", gains.K.front().rows()},
                 {"n", gains.K.front().cols()},
                 {"vertex_count", gains.vertex_count()},
                 {"gains", list}};
  return doc.dump(2) + "\n";
}

StageGains gains_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("gains JSON parse error: ") +
                                err.what());
  }
  for (const char* key : {"m", "n", "vertex_count", "gains"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("gains JSON: missing key '") +
                                  key + "'");
    }
  }
  const auto m = doc.at("m").get<Eigen::Index>();
  const auto n = doc.at("n").get<Eigen::Index>();
  StageGains gains;
  for (std::size_t i = 0; i < doc.at("gains").size(); ++i) {
    Eigen::MatrixXd K = matrix_from_json(doc.at("gains").at(i), "gains");
    if (K.rows() != m || K.cols() != n) {
      throw std::invalid_argument("gains JSON: gain shape mismatch");
    }
    gains.K.push_back(std::move(K));
  }
  if (gains.vertex_count() != doc.at("vertex_count").get<int>()) {
    throw std::invalid_argument("gains JSON: vertex_count mismatch");
  }
  return gains;
}

void save_gains(const std::string& path, const StageGains& gains) {
  write_file(path, gains_to_json(gains));
}

StageGains load_gains(const std::string& path) {
  return gains_from_json(read_file(path));
}

}  // namespace prhpg
