#pragma once

#include <stdexcept>
#include <string>

#include "nearalg/lab/budget.hpp"
#include "nearalg/lab/instance.hpp"
#include "nearalg/lab/report.hpp"

namespace nearalg {

enum class Pipeline { Dist, Iso, Unitary, OzPerturb, OzEmbed };

const char* to_string(Pipeline p);
/// Accepts dist, iso, unitary, oz-perturb, oz-embed and oz (= oz-embed).
Pipeline pipeline_from_string(const std::string& s);

/// An error raised inside a pipeline, labeled with its stage.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("stage " + stage + ": " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineOptions {
  SampleSpec samples{16, 16, true, 0, 300};
  int max_iter = 12;
  /// Use the two-piece split decomposition in the order-zero pipelines.
  bool split = false;
};

/// Runs the stages of one pipeline on an instance and collects every certificate,
/// each stamped with track, seed and versions.
Report run_pipeline(const Instance& inst, Pipeline pipeline, const ToleranceBudget& budget,
                    const PipelineOptions& opt = {});

}  // namespace nearalg
