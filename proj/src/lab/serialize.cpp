#include "nearalg/lab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nearalg {

namespace {

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

/// Non-finite values are stored as null, "inf" or "-inf".
Json extended(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double extended_from(const Json& j, const std::string& path) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw SchemaError(path, "expected a number, got the string '" + s + "'");
  }
  return number(j, path);
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

int positive_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(path, "expected a nonnegative integer");
  return j.get<int>();
}

void check_version(const Json& j, const std::string& kind) {
  const Json& v = field(j, "schema_version", "");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw SchemaError("schema_version", "expected " + std::to_string(kSchemaVersion));
  if (text(field(j, "kind", ""), "kind") != kind) throw SchemaError("kind", "expected '" + kind + "'");
}

}  // namespace

Json to_json(const CMatrix& x) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      re.push_back(x(i, k).real());
      im.push_back(x(i, k).imag());
    }
  return Json{{"rows", x.rows()}, {"cols", x.cols()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json& j, const std::string& path) {
  const int rows = positive_int(field(j, "rows", path), sub(path, "rows"));
  const int cols = positive_int(field(j, "cols", path), sub(path, "cols"));
  const Json& re = field(j, "re", path);
  const Json& im = field(j, "im", path);
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  for (const auto& [arr, key] : {std::pair<const Json*, const char*>{&re, "re"}, {&im, "im"}})
    if (!arr->is_array() || arr->size() != count)
      throw SchemaError(sub(path, key), "expected an array of " + std::to_string(count) + " numbers");
  CMatrix x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const std::size_t at = static_cast<std::size_t>(i) * cols + k;
      const std::string where = "[" + std::to_string(at) + "]";
      x(i, k) = cplx(number(re[at], sub(path, "re") + where), number(im[at], sub(path, "im") + where));
    }
  return x;
}

Json to_json(const ConcreteAlgebra& a) {
  Json basis = Json::array();
  for (const auto& b : a.basis()) basis.push_back(to_json(b));
  return Json{{"ambient_dim", a.ambient_dim()}, {"basis", basis}, {"meta", a.meta}};
}

ConcreteAlgebra algebra_from_json(const Json& j, const std::string& path) {
  const int n = positive_int(field(j, "ambient_dim", path), sub(path, "ambient_dim"));
  const Json& basis = field(j, "basis", path);
  if (!basis.is_array()) throw SchemaError(sub(path, "basis"), "expected an array of matrices");
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string where = sub(path, "basis") + "[" + std::to_string(i) + "]";
    CMatrix m = matrix_from_json(basis[i], where);
    if (m.rows() != n || m.cols() != n) throw SchemaError(where, "expected a square matrix of size ambient_dim");
    mats.push_back(std::move(m));
  }
  Subspace span;
  try {
    span = Subspace::from_orthonormal(n, n, mats);
  } catch (const PreconditionError& e) {
    throw SchemaError(sub(path, "basis"), e.what());
  }
  ConcreteAlgebra a(n, std::move(span));
  if (j.contains("meta")) a.meta = text(j["meta"], sub(path, "meta"));
  return a;
}

Json to_json(const Certificate& c) {
  Json inputs = Json::array();
  for (const auto& [k, v] : c.inputs) inputs.push_back(Json::array({k, extended(v)}));
  return Json{{"name", c.name},         {"formula", c.formula}, {"inputs", inputs},
              {"ceiling", extended(c.ceiling)}, {"achieved", extended(c.achieved)}, {"verdict", to_string(c.verdict)},
              {"provenance", c.provenance}, {"note", c.note}};
}

Certificate certificate_from_json(const Json& j, const std::string& path) {
  Certificate c;
  c.name = text(field(j, "name", path), sub(path, "name"));
  c.formula = text(field(j, "formula", path), sub(path, "formula"));
  const Json& inputs = field(j, "inputs", path);
  if (!inputs.is_array()) throw SchemaError(sub(path, "inputs"), "expected an array of [name, value] pairs");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string where = sub(path, "inputs") + "[" + std::to_string(i) + "]";
    if (!inputs[i].is_array() || inputs[i].size() != 2) throw SchemaError(where, "expected a [name, value] pair");
    c.inputs.push_back({text(inputs[i][0], where + "[0]"), extended_from(inputs[i][1], where + "[1]")});
  }
  c.ceiling = extended_from(field(j, "ceiling", path), sub(path, "ceiling"));
  c.achieved = extended_from(field(j, "achieved", path), sub(path, "achieved"));
  try {
    c.verdict = verdict_from_string(text(field(j, "verdict", path), sub(path, "verdict")));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(sub(path, "verdict"), e.what());
  }
  c.provenance = text(field(j, "provenance", path), sub(path, "provenance"));
  c.note = text(field(j, "note", path), sub(path, "note"));
  return c;
}

Json to_json(const Instance& inst) {
  Json j{{"schema_version", kSchemaVersion},
         {"kind", "instance"},
         {"id", inst.id},
         {"recipe", to_string(inst.recipe)},
         {"params", Json{{"algebra", inst.params.algebra}, {"dim", inst.params.dim}, {"eps", inst.params.eps}}},
         {"seed", inst.seed},
         {"a", to_json(inst.a)},
         {"b", to_json(inst.b)}};
  j["true_unitary"] = inst.true_unitary ? to_json(*inst.true_unitary) : Json(nullptr);
  j["distance_bound"] = inst.distance_bound ? Json(*inst.distance_bound) : Json(nullptr);
  return j;
}

Instance instance_from_json(const Json& j) {
  check_version(j, "instance");
  Instance inst;
  inst.id = text(field(j, "id", ""), "id");
  try {
    inst.recipe = recipe_from_string(text(field(j, "recipe", ""), "recipe"));
  } catch (const PreconditionError& e) {
    throw SchemaError("recipe", e.what());
  }
  const Json& p = field(j, "params", "");
  inst.params.algebra = text(field(p, "algebra", "params"), "params.algebra");
  inst.params.dim = positive_int(field(p, "dim", "params"), "params.dim");
  inst.params.eps = number(field(p, "eps", "params"), "params.eps");
  const Json& seed = field(j, "seed", "");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    throw SchemaError("seed", "expected a nonnegative integer");
  inst.seed = seed.get<std::uint64_t>();
  inst.a = algebra_from_json(field(j, "a", ""), "a");
  inst.b = algebra_from_json(field(j, "b", ""), "b");
  if (inst.a.ambient_dim() != inst.b.ambient_dim()) throw SchemaError("b.ambient_dim", "differs from a.ambient_dim");
  const Json& u = field(j, "true_unitary", "");
  if (!u.is_null()) inst.true_unitary = matrix_from_json(u, "true_unitary");
  const Json& d = field(j, "distance_bound", "");
  if (!d.is_null()) inst.distance_bound = number(d, "distance_bound");
  return inst;
}

Json parse_json(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("(document)", e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << s;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace nearalg
