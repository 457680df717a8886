#include "nearalg/lab/budget.hpp"

#include <sstream>

namespace nearalg {

WindowSpec window_of(Hypothesis h) {
  switch (h) {
    case Hypothesis::RepairDefect: return {"multiplicativity repair", "gamma", window::repair_defect, false};
    case Hypothesis::IntertwineDistance: return {"intertwining unitary", "gamma", window::intertwine_distance, false};
    case Hypothesis::IsoEta: return {"intertwining isomorphism", "eta", window::iso_eta, true};
    case Hypothesis::CloseGamma: return {"close isomorphism", "gamma", window::close_gamma, true};
    case Hypothesis::ProjectionGamma: return {"order-zero projection", "gamma", window::projection_gamma, true};
    case Hypothesis::UnitaryGamma: return {"unitary implementation", "gamma", window::unitary_gamma, false};
    case Hypothesis::SpatialDistance: return {"spatial implementation", "d", window::spatial_distance, true};
  }
  throw PreconditionError("window_of: unknown hypothesis");
}

bool ToleranceBudget::admits(Hypothesis h, double value) const {
  return track == Track::Experimental || window_of(h).admits(value);
}

void ToleranceBudget::require(Hypothesis h, double value, const std::string& stage) const {
  if (admits(h, value)) return;
  const WindowSpec w = window_of(h);
  std::ostringstream os;
  os << stage << ": " << w.parameter << " = " << format_double(value) << " outside the " << w.name << " window ("
     << w.parameter << (w.strict ? " < " : " <= ") << format_double(w.bound) << ") on the paper track";
  throw PreconditionError(os.str());
}

}  // namespace nearalg
