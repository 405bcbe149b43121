// Command-line front end: construction, sampling, verification suites, cell census and figure export.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tnnflow/error.hpp"
#include "tnnflow/suite.hpp"

using tnnflow::CommandResult;
using tnnflow::RunConfig;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write to " + path + " failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool on_command_line(int argc, char** argv, const std::string& flag) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// json: the full report to --out or stdout. text: summary to stdout, report to --out if given.
int emit(const CommandResult& r, const RunConfig& cfg, const std::string& default_out = "") {
  const std::string doc = r.report.dump(2) + "\n";
  const std::string out = cfg.out.empty() ? default_out : cfg.out;
  if (cfg.format == "json") {
    if (out.empty())
      std::cout << doc;
    else
      write_file(out, doc);
  } else {
    std::cout << r.summary;
    if (!out.empty()) write_file(out, doc);
  }
  return r.pass ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Totally nonnegative flag varieties and the contractive tau flow"};
  app.set_config("--config", "", "TOML/INI file with option defaults (flags override it)");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string j_text;
  std::uint64_t seed = 0;
  app.add_option("--n", cfg.n, "Size of SL(n)")->capture_default_str();
  app.add_option("--J", j_text, "Parabolic index set, e.g. \"1,3\" (empty: complete flags)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (falls back to $TNNFLOW_SEED, then 0)");
  app.add_option("--count", cfg.count, "Number of samples")->capture_default_str();
  app.add_option("--axiom-count", cfg.axiom_count, "Samples per flow axiom in verify")->capture_default_str();
  app.add_option("--t", cfg.t, "Flow time");
  app.add_option("--radius", cfg.radius, "Ball radius (default: 1e-2 x smallest boundary chart norm)");
  app.add_option("--tol-float", cfg.float_tol, "Float agreement tolerance")->capture_default_str();
  app.add_option("--tol-bisect", cfg.bisect_tol, "Sphere crossing tolerance")->capture_default_str();
  app.add_option("--tol-vanish", cfg.vanish_tol, "Vanishing tolerance for coordinates")->capture_default_str();
  app.add_option("--format", cfg.format, "text, json, or svg (figure)")
      ->check(CLI::IsMember({"text", "json", "svg"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output file");

  auto* pinning = app.add_subcommand("pinning", "Print the pinning e_i, f_i, h_i and tau");
  auto* sample = app.add_subcommand("sample", "Sample factorized TNN group elements with minor certificates");
  sample->add_flag("--positive", cfg.positive, "Strictly positive parameters (totally positive samples)");
  auto* embed = app.add_subcommand("embed", "Build Lambda_lambda for J and its eigenchart");
  auto* flow = app.add_subcommand("flow", "Flow a chart point or a flag given as JSON");
  flow->add_option("--from", cfg.from, "JSON file with \"chart_point\" or \"matrix\" (and optional n, J)")->required();
  auto* verify = app.add_subcommand("verify", "Run the full property suite; exit status 1 on any failure");
  auto* cells = app.add_subcommand("cells", "SL3 cell census and face poset");
  auto* fold = app.add_subcommand("fold", "Check that sigma-fixed TNN flags stay fixed under the flow");
  auto* figure = app.add_subcommand("figure", "Write the Figure 1 drawing (svg) or census document (json)");
  for (auto* sub : {pinning, sample, embed, flow, verify, cells, fold, figure}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (seed_opt->count() > 0) {
      cfg.seed = seed;
      cfg.seed_source = on_command_line(argc, argv, "--seed") ? "flag" : "config";
    } else if (const char* env = std::getenv("TNNFLOW_SEED")) {
      try {
        std::size_t pos = 0;
        cfg.seed = std::stoull(env, &pos);
        if (pos != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw tnnflow::DomainError(std::string("TNNFLOW_SEED is not an unsigned integer: ") + env);
      }
      cfg.seed_source = "env";
    }
    cfg.j = tnnflow::parse_index_set(j_text, cfg.n);
    cfg.validate();

    if (*pinning) return emit(tnnflow::run_pinning(cfg), cfg);
    if (*sample) return emit(tnnflow::run_sample(cfg), cfg);
    if (*embed) return emit(tnnflow::run_embed(cfg), cfg);
    if (*flow) {
      nlohmann::json input;
      try {
        input = nlohmann::json::parse(read_file(cfg.from));
      } catch (const nlohmann::json::exception& e) {
        throw tnnflow::DomainError(cfg.from + ": " + e.what());
      }
      return emit(tnnflow::run_flow(cfg, input), cfg);
    }
    if (*verify) return emit(tnnflow::run_verify(cfg), cfg);
    if (*cells) return emit(tnnflow::run_cells(cfg), cfg, "cells.json");
    if (*fold) return emit(tnnflow::run_fold(cfg), cfg);
    if (*figure) {
      const std::string doc = tnnflow::run_figure(cfg);
      if (cfg.out.empty())
        std::cout << doc;
      else
        write_file(cfg.out, doc);
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "tnnflow: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "tnnflow: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
