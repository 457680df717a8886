#include "nearalg/lab/report.hpp"

#include <algorithm>
#include <sstream>

namespace nearalg {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string track_of(const Certificate& c) {
  const std::size_t sp = c.provenance.find(' ');
  return c.provenance.substr(0, sp);
}

}  // namespace

const char* library_version() { return "0.1.0"; }

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "table") return Format::Table;
  throw PreconditionError("format: expected json, csv or table, got '" + s + "'");
}

bool on_paper_track(const Certificate& c) { return track_of(c) == to_string(Track::Paper); }

int Report::exit_code() const {
  for (const auto& c : certificates)
    if (on_paper_track(c) && !c.passed()) return 1;
  return 0;
}

Json to_json(const Report& r) {
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  Json summary = Json::array();
  for (const auto& [k, v] : r.summary) summary.push_back(Json::array({k, v}));
  return Json{{"schema_version", kSchemaVersion}, {"kind", "report"},       {"pipeline", r.pipeline},
              {"instance_id", r.instance_id},    {"seed", r.seed},         {"track", to_string(r.track)},
              {"summary", summary},              {"certificates", certs},  {"timestamp", r.timestamp}};
}

Report report_from_json(const Json& j) {
  auto get = [&j](const char* key) -> const Json& {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(key, "missing field");
    return j[key];
  };
  const Json& version = get("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw SchemaError("schema_version", "expected " + std::to_string(kSchemaVersion));
  if (!get("kind").is_string() || get("kind").get<std::string>() != "report") throw SchemaError("kind", "expected 'report'");
  Report r;
  for (const char* key : {"pipeline", "instance_id", "track", "timestamp"})
    if (!get(key).is_string()) throw SchemaError(key, "expected a string");
  r.pipeline = get("pipeline").get<std::string>();
  r.instance_id = get("instance_id").get<std::string>();
  r.timestamp = get("timestamp").get<std::string>();
  try {
    r.track = track_from_string(get("track").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError("track", e.what());
  }
  if (!get("seed").is_number_unsigned()) throw SchemaError("seed", "expected a nonnegative integer");
  r.seed = get("seed").get<std::uint64_t>();
  const Json& summary = get("summary");
  if (!summary.is_array()) throw SchemaError("summary", "expected an array of [name, value] pairs");
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const Json& e = summary[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number())
      throw SchemaError("summary[" + std::to_string(i) + "]", "expected a [name, number] pair");
    r.summary.push_back({e[0].get<std::string>(), e[1].get<double>()});
  }
  const Json& certs = get("certificates");
  if (!certs.is_array()) throw SchemaError("certificates", "expected an array");
  for (std::size_t i = 0; i < certs.size(); ++i)
    r.certificates.push_back(certificate_from_json(certs[i], "certificates[" + std::to_string(i) + "]"));
  return r;
}

std::string render(const std::vector<Certificate>& certs, Format format) {
  std::ostringstream os;
  switch (format) {
    case Format::Json: {
      Json arr = Json::array();
      for (const auto& c : certs) arr.push_back(to_json(c));
      return dump_json(arr);
    }
    case Format::Csv:
      os << "name,verdict,achieved,ceiling,track,formula,note\n";
      for (const auto& c : certs)
        os << csv_field(c.name) << "," << to_string(c.verdict) << "," << format_double(c.achieved) << ","
           << format_double(c.ceiling) << "," << csv_field(track_of(c)) << "," << csv_field(c.formula) << ","
           << csv_field(c.note) << "\n";
      return os.str();
    case Format::Table: {
      std::size_t width = 4;
      for (const auto& c : certs) width = std::max(width, c.name.size());
      auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
      os << pad("name", width) << "  " << pad("verdict", 9) << "  " << pad("achieved", 24) << "  "
         << pad("ceiling", 24) << "  track\n";
      for (const auto& c : certs)
        os << pad(c.name, width) << "  " << pad(to_string(c.verdict), 9) << "  " << pad(format_double(c.achieved), 24)
           << "  " << pad(format_double(c.ceiling), 24) << "  " << track_of(c) << "\n";
      return os.str();
    }
  }
  return os.str();
}

std::string render(const Report& r, Format format) {
  if (format == Format::Json) return dump_json(to_json(r));
  if (format == Format::Csv) return render(r.certificates, format);
  std::ostringstream os;
  os << "pipeline " << r.pipeline << "  instance " << r.instance_id << "  track " << to_string(r.track) << "\n";
  for (const auto& [k, v] : r.summary) os << "  " << k << " = " << format_double(v) << "\n";
  os << render(r.certificates, format);
  os << (r.exit_code() == 0 ? "all paper-track certificates pass\n" : "a paper-track certificate fails\n");
  return os.str();
}

}  // namespace nearalg
