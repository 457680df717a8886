#include "nearalg/lab/pipeline.hpp"

#include <sstream>

#include "nearalg/orderzero.hpp"

namespace nearalg {

namespace {

template <class F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    std::string what = e.what();
    if (what.rfind(name + ": ", 0) == 0) what.erase(0, name.size() + 2);
    throw StageError(name, what);
  }
}

std::string provenance_tail(std::uint64_t seed) {
  std::ostringstream os;
  os << " seed=" << seed << " nearalg " << library_version() << " eigen " << EIGEN_WORLD_VERSION << "."
     << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
  return os.str();
}

void append(std::vector<Certificate>& out, const std::vector<Certificate>& certs, const std::string& suffix = "") {
  for (Certificate c : certs) {
    c.name += suffix;
    out.push_back(std::move(c));
  }
}

Certificate retracked(Certificate c, Track track) {
  c.provenance = to_string(track);
  return c;
}

IsoOptions iso_options(const ToleranceBudget& budget, const PipelineOptions& opt) {
  IsoOptions o;
  o.mu = budget.mu;
  o.eps = budget.epsilon;
  o.max_iter = opt.max_iter;
  o.track = budget.track;
  o.samples = opt.samples;
  return o;
}

NucDimDecomposition decomposition_for(const ConcreteAlgebra& a, const PipelineOptions& opt) {
  if (!opt.split) return finite_dimensional_decomposition(a);
  return split_decomposition(a, std::vector<double>(a.structure().summands.size(), 0.5));
}

}  // namespace

const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Dist: return "dist";
    case Pipeline::Iso: return "iso";
    case Pipeline::Unitary: return "unitary";
    case Pipeline::OzPerturb: return "oz-perturb";
    case Pipeline::OzEmbed: return "oz-embed";
  }
  return "dist";
}

Pipeline pipeline_from_string(const std::string& s) {
  if (s == "dist") return Pipeline::Dist;
  if (s == "iso") return Pipeline::Iso;
  if (s == "unitary") return Pipeline::Unitary;
  if (s == "oz-perturb") return Pipeline::OzPerturb;
  if (s == "oz-embed" || s == "oz") return Pipeline::OzEmbed;
  throw PreconditionError("pipeline: expected dist, iso, unitary, oz-perturb or oz-embed, got '" + s + "'");
}

Report run_pipeline(const Instance& inst, Pipeline pipeline, const ToleranceBudget& budget,
                    const PipelineOptions& opt) {
  const ConcreteAlgebra& a = inst.a;
  const ConcreteAlgebra& b = inst.b;
  Report rep;
  rep.pipeline = to_string(pipeline);
  rep.instance_id = inst.id;
  rep.seed = inst.seed;
  rep.track = budget.track;
  auto& certs = rep.certificates;

  const DistanceInterval dist = stage("distance", [&] { return kk_distance(a, b, opt.samples); });
  rep.summary.push_back({"distance_lo", dist.lo});
  rep.summary.push_back({"distance_hi", dist.hi});
  certs.push_back(bound_certificate("distance interval", "lo <= hi for the sampled distance",
                                    {{"lo", dist.lo}, {"hi", dist.hi}}, dist.hi + tol::roundoff, dist.lo));
  if (inst.distance_bound) {
    rep.summary.push_back({"distance_bound", *inst.distance_bound});
    certs.push_back(bound_certificate("known conjugation bound", "hi <= 2 ||u - 1||",
                                      {{"distance_bound", *inst.distance_bound}},
                                      *inst.distance_bound + tol::psd, dist.hi));
  }
  const double gamma = std::max(dist.hi, inst.distance_bound.value_or(0.0));

  switch (pipeline) {
    case Pipeline::Dist: {
      const ArvesonResult ar = stage("expectation", [&] { return arveson_restrict(a, b, a.basis(), dist.hi); });
      certs.push_back(retracked(ar.certificate, budget.track));
      break;
    }
    case Pipeline::Iso:
    case Pipeline::Unitary: {
      if (pipeline == Pipeline::Unitary)
        stage("unitary implementation", [&] {
          budget.require(Hypothesis::UnitaryGamma, dist.hi, "unitary implementation");
          return 0;
        });
      const IsoResult iso = stage("close isomorphism", [&] {
        budget.require(Hypothesis::CloseGamma, dist.hi, "close isomorphism");
        return close_isomorphism(a, b, dist, a.basis(), b.basis(), iso_options(budget, opt));
      });
      rep.summary.push_back({"eta", iso.eta});
      rep.summary.push_back({"stages", static_cast<double>(iso.trace.size())});
      rep.summary.push_back({"min_singular_value", iso.min_singular_value});
      append(certs, iso.certificates);
      if (pipeline == Pipeline::Unitary) {
        const ImplementResult imp =
            stage("unitary implementation", [&] { return implement_unitarily(iso.map, &b, budget.track); });
        rep.summary.push_back({"u_minus_one", opnorm(imp.u - identity(a.ambient_dim()))});
        rep.summary.push_back({"conjugation_residual", imp.conjugation_residual});
        rep.summary.push_back({"subspace_residual", imp.subspace_residual});
        append(certs, imp.certificates);
      }
      break;
    }
    case Pipeline::OzPerturb:
    case Pipeline::OzEmbed: {
      const NucDimDecomposition dec = stage("decomposition", [&] { return decomposition_for(a, opt); });
      certs.push_back(retracked(verify_nucdim_decomposition(a, a.basis(), budget.epsilon, dec), budget.track));
      rep.summary.push_back({"n", static_cast<double>(dec.n)});
      rep.summary.push_back({"gamma", gamma});
      PerturbOptions po;
      po.track = budget.track;
      po.seed = inst.seed;
      std::vector<PerturbResult> pieces;
      if (pipeline == Pipeline::OzPerturb || budget.admits(Hypothesis::ProjectionGamma, gamma)) {
        pieces = stage("order-zero perturbation", [&] {
          std::vector<PerturbResult> out;
          for (std::size_t i = 0; i < dec.ups.size(); ++i) {
            const std::optional<OrderZeroMap> oz = is_order_zero(dec.ups[i]);
            if (!oz) throw NumericalError("up map " + std::to_string(i) + " is not order zero");
            out.push_back(perturb_order_zero(*oz, b, gamma, po));
          }
          return out;
        });
      }
      if (pipeline == Pipeline::OzPerturb) {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
          rep.summary.push_back({"achieved_cb_" + std::to_string(i), pieces[i].achieved_cb});
          append(certs, pieces[i].certificates, " (summand " + std::to_string(i) + ")");
        }
        break;
      }
      const double eta = transfer_ceiling(dec.n, gamma) + dec.defect;
      rep.summary.push_back({"eta", eta});
      const IsoResult emb = stage("nuclear dimension embedding", [&] {
        budget.require(Hypothesis::IsoEta, eta, "nuclear dimension embedding");
        return near_embed_nucdim(a, b, gamma, dec, a.basis(), iso_options(budget, opt));
      });
      rep.summary.push_back({"min_singular_value", emb.min_singular_value});
      append(certs, emb.certificates);
      if (!pieces.empty()) {
        const ProjectionResult pr =
            stage("order-zero projection", [&] { return order_zero_projection(pieces.front().psi, gamma); });
        rep.summary.push_back({"projection_fit_residual", pr.fit_residual});
        certs.push_back(pr.certificate);
      }
      break;
    }
  }
  const std::string tail = provenance_tail(inst.seed);
  for (auto& c : certs) c.provenance += tail;
  return rep;
}

}  // namespace nearalg
