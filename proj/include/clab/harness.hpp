#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clab/cf.hpp"
#include "clab/collapse.hpp"
#include "clab/config.hpp"
#include "clab/svg.hpp"

namespace clab {

// alpha grammar shared by all commands: RealInput specs plus
// mu:<target>[@depth] and liouville[@depth], which construct quotients.
struct AlphaSpec {
  std::string text;
  std::optional<RealInput> input;
  std::optional<ContinuedFraction> cf;

  RealSource source() const;
  bool has_cf() const { return cf.has_value(); }
};

AlphaSpec parse_alpha(const std::string& spec);
// comma-separated list; commas inside poly:... fragments stay put
std::vector<AlphaSpec> parse_alpha_list(const std::string& text);

struct RunRecord {
  ExperimentConfig config;
  std::uint64_t config_hash = 0;
  std::string schema = "collapse-lab/1";
  std::string csv;    // full CSV with the resolved config in header comments
  std::string jsonl;  // one JSON object per row
  std::vector<PlotSeries> series;
  std::vector<RefSlope> ref_slopes;
  double wall_seconds = 0;
  size_t row_count = 0;
};

// Dispatch a config to the module operations. Throws on config errors.
RunRecord run(const ExperimentConfig& config);

// SVG plot of a run; throws when the run has fewer than 2 rows.
std::string plot(const RunRecord& record, const std::string& title = "");

const char* tool_version();

}  // namespace clab
