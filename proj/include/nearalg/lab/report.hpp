#pragma once

#include <string>
#include <vector>

#include "nearalg/lab/serialize.hpp"

namespace nearalg {

const char* library_version();

enum class Format { Json, Csv, Table };
Format format_from_string(const std::string& s);

struct Report {
  std::string pipeline;
  std::string instance_id;
  std::uint64_t seed = 0;
  Track track = Track::Paper;
  std::vector<Certificate> certificates;
  std::vector<std::pair<std::string, double>> summary;
  /// The only field that varies between identical runs; empty unless stamped.
  std::string timestamp;

  /// 1 when a paper-track certificate fails, 0 otherwise.
  int exit_code() const;
};

bool on_paper_track(const Certificate& c);

Json to_json(const Report& r);
Report report_from_json(const Json& j);

/// One row per certificate in CSV and table form.
std::string render(const std::vector<Certificate>& certs, Format format);
std::string render(const Report& r, Format format);

}  // namespace nearalg
