// Command-line front end: instance generation, pipelines, report rendering and the acceptance run.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <ctime>
#include <future>
#include <iostream>
#include <sstream>

#include "nearalg/lab/acceptance.hpp"
#include "nearalg/lab/budget.hpp"
#include "nearalg/lab/instance.hpp"
#include "nearalg/lab/pipeline.hpp"
#include "nearalg/lab/report.hpp"
#include "nearalg/lab/serialize.hpp"

using namespace nearalg;

namespace {

struct Settings {
  std::uint64_t seed = 1;
  int dim = 4;
  std::string recipe = "conjugation";
  std::string algebra = "blocks:2,1";
  double eps = 1e-6;
  std::string track = "paper";
  int samples = 16;
  int iters = 12;
  double tol = 1e-9;
  std::string out;
  std::string format = "table";
  std::string in;
  int count = 1;
  bool split = false;
  bool timestamp = true;
  std::vector<int> only;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const Settings& s, const std::string& text) {
  if (s.out.empty())
    std::cout << text;
  else
    write_text(s.out, text);
}

Instance instance_for(const Settings& s, std::uint64_t seed) {
  if (!s.in.empty()) return instance_from_json(parse_json(read_text(s.in)));
  return gen_instance(recipe_from_string(s.recipe), {s.algebra, s.dim, s.eps}, seed);
}

int run_gen(const Settings& s) {
  emit(s, dump_json(to_json(instance_for(s, s.seed))));
  return 0;
}

int run_pipeline_command(const Settings& s, Pipeline p) {
  if (s.count < 1) throw PreconditionError("--count must be positive");
  if (!s.in.empty() && s.count > 1) throw PreconditionError("--count needs generated instances, not --in");
  ToleranceBudget budget;
  budget.track = track_from_string(s.track);
  budget.epsilon = s.tol;
  PipelineOptions opt;
  opt.samples.random_selfadjoint = opt.samples.random_unitary = s.samples;
  opt.max_iter = s.iters;
  opt.split = s.split;

  // Instances run in parallel; reports are merged by instance id.
  std::vector<std::future<Report>> jobs;
  for (int i = 0; i < s.count; ++i) {
    const std::uint64_t seed = s.seed + static_cast<std::uint64_t>(i);
    jobs.push_back(std::async(std::launch::async, [&s, p, budget, opt, seed] {
      PipelineOptions o = opt;
      o.samples.seed = seed;
      return run_pipeline(instance_for(s, seed), p, budget, o);
    }));
  }
  std::vector<Report> reports;
  for (auto& j : jobs) reports.push_back(j.get());
  std::sort(reports.begin(), reports.end(),
            [](const Report& a, const Report& b) { return a.instance_id < b.instance_id; });
  const std::string stamp = s.timestamp ? utc_now() : "";
  for (auto& r : reports) r.timestamp = stamp;

  const Format fmt = format_from_string(s.format);
  std::string text;
  if (reports.size() == 1) {
    text = render(reports.front(), fmt);
  } else if (fmt == Format::Json) {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    text = dump_json(arr);
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::string part = render(reports[i], fmt);
      // CSV keeps one header for the merged rows.
      if (fmt == Format::Csv && i > 0) part = part.substr(part.find('\n') + 1);
      text += part;
    }
  }
  emit(s, text);
  int code = 0;
  for (const auto& r : reports) code = std::max(code, r.exit_code());
  return code;
}

int run_report(const Settings& s) {
  if (s.in.empty()) throw PreconditionError("report needs --in");
  const Json j = parse_json(read_text(s.in));
  const Format fmt = format_from_string(s.format);
  std::string text;
  int code = 0;
  auto one = [&](const Json& doc) {
    const Report r = report_from_json(doc);
    code = std::max(code, r.exit_code());
    text += render(r, fmt);
  };
  if (j.is_array())
    for (const auto& doc : j) one(doc);
  else
    one(j);
  emit(s, text);
  return code;
}

int run_selftest(const Settings& s) {
  AcceptanceOptions opt;
  opt.seed = s.seed;
  opt.only = s.only;
  std::ostringstream log;
  const auto results = run_acceptance(opt, [&](const CriterionResult& r) {
    std::cout << format_line(r) << std::endl;
    log << format_line(r) << "\n";
  });
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  if (!s.out.empty()) write_text(s.out, log.str());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near inclusions of finite-dimensional C*-algebras"};
  app.set_version_flag("--version", std::string(library_version()));
  app.set_config("--config", "", "INI or TOML file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--seed", s.seed, "Random seed")->envname("NEARALG_SEED");
  app.add_option("--dim", s.dim, "Ambient matrix size")->envname("NEARALG_DIM");
  app.add_option("--recipe", s.recipe, "conjugation, choi-noise or block-rotation")->envname("NEARALG_RECIPE");
  app.add_option("--algebra", s.algebra, "full:n, blocks:n1,n2,..., diag:k or amp:nxm")->envname("NEARALG_ALGEBRA");
  app.add_option("--eps", s.eps, "Perturbation size of the recipe")->envname("NEARALG_EPS");
  app.add_option("--track", s.track, "paper or experimental")->envname("NEARALG_TRACK");
  app.add_option("--samples", s.samples, "Random self-adjoint and unitary samples each")->envname("NEARALG_SAMPLES");
  app.add_option("--iters", s.iters, "Stage limit of the intertwining")->envname("NEARALG_ITERS");
  app.add_option("--tol", s.tol, "Repair tolerance epsilon")->envname("NEARALG_TOL");
  app.add_option("--out", s.out, "Output file, stdout when absent")->envname("NEARALG_OUT");
  app.add_option("--format", s.format, "json, csv or table")->envname("NEARALG_FORMAT");
  app.add_option("--in", s.in, "Input instance or report file")->envname("NEARALG_IN");

  auto* gen = app.add_subcommand("gen", "Generate an instance as JSON");
  std::vector<std::pair<CLI::App*, Pipeline>> pipelines;
  for (Pipeline p : {Pipeline::Dist, Pipeline::Iso, Pipeline::Unitary, Pipeline::OzPerturb, Pipeline::OzEmbed}) {
    auto* sub = app.add_subcommand(to_string(p), std::string("Run the ") + to_string(p) + " pipeline");
    sub->add_option("--count", s.count, "Instances with consecutive seeds, run in parallel");
    sub->add_flag("!--no-timestamp", s.timestamp, "Leave the timestamp field empty");
    if (p == Pipeline::OzPerturb || p == Pipeline::OzEmbed)
      sub->add_flag("--split", s.split, "Use the two-piece decomposition");
    pipelines.push_back({sub, p});
  }
  auto* report = app.add_subcommand("report", "Render a saved report");
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance criteria");
  selftest->add_option("--only", s.only, "Criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(s);
    for (const auto& [sub, p] : pipelines)
      if (*sub) return run_pipeline_command(s, p);
    if (*report) return run_report(s);
    if (*selftest) return run_selftest(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
