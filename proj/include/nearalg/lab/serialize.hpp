#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nearalg/lab/instance.hpp"

namespace nearalg {

inline constexpr int kSchemaVersion = 1;

/// Malformed document; `path` locates the offending field, e.g. "a.basis[2].re".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

using Json = nlohmann::ordered_json;

Json to_json(const CMatrix& x);
CMatrix matrix_from_json(const Json& j, const std::string& path);

Json to_json(const ConcreteAlgebra& a);
ConcreteAlgebra algebra_from_json(const Json& j, const std::string& path);

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j, const std::string& path);

Json to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

/// Parses text; syntax errors become SchemaError at the document root.
Json parse_json(const std::string& text);
std::string dump_json(const Json& j);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace nearalg
