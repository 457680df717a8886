#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nearalg {

/// Whether hypothesis windows of the published constants are enforced
/// (paper) or only a-posteriori checks are made (experimental).
enum class Track { Paper, Experimental };

enum class Verdict { Pass, Fail, Heuristic };

const char* to_string(Track t);
const char* to_string(Verdict v);
Track track_from_string(const std::string& s);
Verdict verdict_from_string(const std::string& s);

/// A checked inequality `achieved <= ceiling` with the inputs it depends on.
struct Certificate {
  std::string name;
  std::string formula;
  std::vector<std::pair<std::string, double>> inputs;
  double ceiling = 0.0;
  double achieved = 0.0;
  Verdict verdict = Verdict::Fail;
  std::string provenance;
  std::string note;

  bool passed() const { return verdict != Verdict::Fail; }
};

/// Builds a certificate whose verdict is Pass iff achieved <= ceiling.
Certificate bound_certificate(std::string name, std::string formula,
                              std::vector<std::pair<std::string, double>> inputs,
                              double ceiling, double achieved, Track track = Track::Experimental);

bool all_passed(const std::vector<Certificate>& certs);

}  // namespace nearalg
