#include "nearalg/lab/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nearalg/averaging.hpp"

namespace nearalg {

namespace {

std::vector<int> parse_ints(const std::string& text, char sep, const std::string& family) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || v <= 0)
      throw PreconditionError("algebra family '" + family + "': expected positive integers");
    out.push_back(v);
  }
  if (out.empty()) throw PreconditionError("algebra family '" + family + "': missing sizes");
  return out;
}

}  // namespace

const char* to_string(Recipe r) {
  switch (r) {
    case Recipe::Conjugation: return "conjugation";
    case Recipe::ChoiNoise: return "choi-noise";
    case Recipe::BlockRotation: return "block-rotation";
  }
  return "conjugation";
}

Recipe recipe_from_string(const std::string& s) {
  if (s == "conjugation") return Recipe::Conjugation;
  if (s == "choi-noise") return Recipe::ChoiNoise;
  if (s == "block-rotation") return Recipe::BlockRotation;
  throw PreconditionError("recipe: expected conjugation, choi-noise or block-rotation, got '" + s + "'");
}

ConcreteAlgebra algebra_family(const std::string& family, int dim) {
  const std::size_t colon = family.find(':');
  if (colon == std::string::npos) throw PreconditionError("algebra family '" + family + "': expected kind:sizes");
  const std::string kind = family.substr(0, colon);
  const std::string rest = family.substr(colon + 1);
  std::vector<int> sizes, mults;
  if (kind == "full") {
    sizes = parse_ints(rest, ',', family);
    if (sizes.size() != 1) throw PreconditionError("algebra family '" + family + "': full takes one size");
  } else if (kind == "blocks") {
    sizes = parse_ints(rest, ',', family);
  } else if (kind == "diag") {
    const std::vector<int> k = parse_ints(rest, ',', family);
    if (k.size() != 1) throw PreconditionError("algebra family '" + family + "': diag takes one count");
    sizes.assign(k[0], 1);
  } else if (kind == "amp") {
    const std::vector<int> nm = parse_ints(rest, 'x', family);
    if (nm.size() != 2) throw PreconditionError("algebra family '" + family + "': amp takes nxm");
    sizes = {nm[0]};
    mults = {nm[1]};
  } else {
    throw PreconditionError("algebra family '" + family + "': unknown kind '" + kind + "'");
  }
  int need = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) need += sizes[k] * (mults.empty() ? 1 : mults[k]);
  if (need > dim) throw PreconditionError("algebra family '" + family + "' does not fit in dimension " + std::to_string(dim));
  ConcreteAlgebra a = block_algebra(sizes, dim, mults);
  a.meta = family;
  return a;
}

LinMap random_ucp(const ConcreteAlgebra& domain, int codomain_dim, int kraus_count, Rng& rng) {
  const int n = domain.ambient_dim();
  const int rank = projection_rank(domain.support());
  const int count = std::max(kraus_count, (codomain_dim + rank - 1) / std::max(rank, 1));
  std::vector<CMatrix> ks;
  CMatrix s = CMatrix::Zero(codomain_dim, codomain_dim);
  for (int l = 0; l < count; ++l) {
    ks.push_back(rng.ginibre(codomain_dim, n) * domain.support());
    s += ks.back() * ks.back().adjoint();
  }
  const CMatrix inv_root = hermitian_function(s, [](double v) { return 1.0 / std::sqrt(v); });
  for (auto& k : ks) k = inv_root * k;
  return LinMap::from_function(domain, codomain_dim, [&ks, codomain_dim](const CMatrix& x) {
    CMatrix y = CMatrix::Zero(codomain_dim, codomain_dim);
    for (const auto& k : ks) y += k * x * k.adjoint();
    return y;
  }, identity(codomain_dim));
}

Instance gen_instance(Recipe recipe, const InstanceParams& params, std::uint64_t seed) {
  if (params.dim < 1) throw PreconditionError("gen_instance: dim must be positive");
  if (!(params.eps >= 0.0) || !std::isfinite(params.eps)) throw PreconditionError("gen_instance: eps must be finite and >= 0");
  const int n = params.dim;
  Instance inst;
  inst.recipe = recipe;
  inst.params = params;
  inst.seed = seed;
  {
    std::ostringstream os;
    os << to_string(recipe) << "/" << params.algebra << "/d" << n << "/eps" << format_double(params.eps) << "/s" << seed;
    inst.id = os.str();
  }
  Rng rng = Rng::stream(seed, 1);
  const ConcreteAlgebra base = algebra_family(params.algebra, n);
  inst.a = conjugate(base, rng.unitary(n));
  inst.a.meta = params.algebra;

  switch (recipe) {
    case Recipe::Conjugation: {
      const CMatrix u = unitary_exp(params.eps * rng.hermitian(n));
      inst.b = conjugate(inst.a, u);
      inst.true_unitary = u;
      inst.distance_bound = 2 * opnorm(u - identity(n));
      break;
    }
    case Recipe::ChoiNoise: {
      if (params.eps > 0.05) throw PreconditionError("gen_instance: choi-noise needs eps <= 0.05");
      Rng noise_rng = Rng::stream(seed, 2);
      const LinMap noise = random_ucp(inst.a, n, 2, noise_rng);
      const LinMap phi = inclusion_map(inst.a).scaled(1.0 - params.eps) + noise.scaled(params.eps);
      const ImproveResult rep = improve_multiplicativity(phi, nullptr, inst.a.basis(), 1e-12, Track::Experimental);
      inst.b = generate_algebra(rep.psi.images(), n);
      break;
    }
    case Recipe::BlockRotation: {
      const BlockStructure& st = inst.a.structure();
      std::size_t k = 0;
      for (std::size_t i = 1; i < st.summands.size(); ++i)
        if (st.summands[i].size > st.summands[k].size) k = i;
      const CMatrix p = st.central_projections[k] + (identity(n) - inst.a.support());
      CMatrix h = p * rng.hermitian(n) * p;
      const double hn = opnorm(h);
      if (hn > 0) h /= hn;
      const CMatrix u = unitary_exp(params.eps * h);
      inst.b = conjugate(inst.a, u);
      inst.true_unitary = u;
      inst.distance_bound = 2 * opnorm(u - identity(n));
      break;
    }
  }
  inst.b.meta = params.algebra;
  return inst;
}

}  // namespace nearalg
