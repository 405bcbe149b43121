#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "tnnflow/totpos.hpp"

namespace tnnflow {

/// Effective settings of one run, after merging flags, config file and defaults.
struct RunConfig {
  std::size_t n = 3;
  IndexSet j;
  std::uint64_t seed = 0;
  std::string seed_source = "default";  ///< flag, config, env or default
  std::size_t count = 100;
  std::size_t axiom_count = 1000;
  std::optional<double> t;  ///< flow time; each command has its own default
  std::optional<double> radius;  ///< ball radius; derived from boundary samples when unset
  double float_tol = 1e-10;
  double bisect_tol = 1e-12;
  double vanish_tol = 1e-9;
  std::string format = "text";
  std::string out;
  std::string from;
  bool positive = false;

  /// Throws DomainError on nonpositive tolerances, n < 2 or counts of zero.
  void validate() const;
  nlohmann::json to_json() const;
};

struct CommandResult {
  nlohmann::json report;
  std::string summary;  ///< human-readable text for --format text
  bool pass = true;
};

CommandResult run_pinning(const RunConfig& cfg);
CommandResult run_sample(const RunConfig& cfg);
CommandResult run_embed(const RunConfig& cfg);
/// Flows a chart point ({"chart_point": [...]}) or a flag ({"matrix": [[...]]}) read from JSON.
CommandResult run_flow(const RunConfig& cfg, const nlohmann::json& input);
/// The full property suite; pass is false when any check fails.
CommandResult run_verify(const RunConfig& cfg);
CommandResult run_cells(const RunConfig& cfg);
CommandResult run_fold(const RunConfig& cfg);
/// Census and poset rendered as a Figure 1 document in cfg.format (json or svg).
std::string run_figure(const RunConfig& cfg);

}  // namespace tnnflow
