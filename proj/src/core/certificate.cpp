#include "nearalg/core/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace nearalg {

const char* to_string(Track t) { return t == Track::Paper ? "paper" : "experimental"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Heuristic: return "heuristic";
  }
  return "fail";
}

Track track_from_string(const std::string& s) {
  if (s == "paper") return Track::Paper;
  if (s == "experimental") return Track::Experimental;
  throw std::invalid_argument("track: expected 'paper' or 'experimental', got '" + s + "'");
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "heuristic") return Verdict::Heuristic;
  throw std::invalid_argument("verdict: unknown value '" + s + "'");
}

Certificate bound_certificate(std::string name, std::string formula,
                              std::vector<std::pair<std::string, double>> inputs,
                              double ceiling, double achieved, Track track) {
  Certificate c;
  c.name = std::move(name);
  c.formula = std::move(formula);
  c.inputs = std::move(inputs);
  c.ceiling = ceiling;
  c.achieved = achieved;
  c.verdict = (std::isfinite(achieved) && achieved <= ceiling) ? Verdict::Pass : Verdict::Fail;
  c.provenance = to_string(track);
  return c;
}

bool all_passed(const std::vector<Certificate>& certs) {
  for (const auto& c : certs)
    if (!c.passed()) return false;
  return true;
}

}  // namespace nearalg
