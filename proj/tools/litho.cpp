// litho: mineral inversion pipeline CLI.
//
//   litho synth    generate a synthetic well from a named scenario
//   litho segment  PELT zonation of a well
//   litho invert   full pipeline: segment -> ABC -> clustering -> report
//   litho report   re-render plots from a saved report.json

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "litho/io.hpp"
#include "litho/pipeline.hpp"
#include "litho/synthgen.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

litho::RunConfig load_run_config(const std::string& config_path) {
  litho::Config cfg = litho::Config::parse_file(config_path);
  return litho::RunConfig::from_config(cfg);
}

void apply_overrides(litho::RunConfig& run, const std::string& out,
                     long long seed, unsigned threads) {
  if (!out.empty()) run.out_dir = out;
  if (seed >= 0) run.seed = static_cast<std::uint64_t>(seed);
  if (threads > 0) run.threads = threads;
}

int cmd_invert(const litho::RunConfig& run) {
  const litho::PipelineResult res = litho::run_pipeline(run);
  litho::emit_report(res, run);
  for (const auto& rep : res.layers) {
    std::printf("layer %d [%g, %g] n_abc=%llu mean/depth=%.1f gate=%s hypotheses=%zu\n",
                rep.layer_id, rep.depth_start, rep.depth_end,
                static_cast<unsigned long long>(rep.n_abc), rep.mean_accept_per_depth,
                rep.gate ? "yes" : "no", rep.hypotheses.size());
  }
  std::printf("report written to %s\n", run.out_dir.c_str());
  return kExitOk;
}

int cmd_segment(const litho::RunConfig& run) {
  litho::WellTable well = litho::load_logs(run.logs_path);
  if (!run.curves.empty()) well = litho::select_curves(well, run.curves);
  const litho::Zonation z = litho::zonate(well, run);
  fs::create_directories(run.out_dir);
  std::ofstream out(fs::path(run.out_dir) / "zonation.csv");
  out << "changepoint_row,depth\n";
  for (std::size_t cp : z.changepoints)
    out << cp << "," << well.depths[cp] << "\n";
  std::printf("%zu segments, %zu changepoints -> %s/zonation.csv\n",
              z.segments.size(), z.changepoints.size(), run.out_dir.c_str());
  return kExitOk;
}

int cmd_synth(const std::string& scenario_name, const std::string& endpoints,
              const std::string& out_dir, long long seed, long long n_samples,
              const std::vector<std::string>& curves) {
  litho::EndpointTable table = litho::load_endpoint_table(endpoints);
  if (!curves.empty()) table = table.restrict_curves(curves);
  litho::Scenario s = litho::find_scenario(scenario_name);
  if (seed >= 0) s.seed = static_cast<std::uint64_t>(seed);
  if (n_samples > 0) s.n_samples = static_cast<std::size_t>(n_samples);
  // Noise tied to the synthetic delta profile: sigma = delta / 2.
  s.noise_variances.clear();
  for (const auto& c : table.curves()) {
    double delta = 0.05;
    if (c.name == "GR") delta = 12.0;
    else if (c.name == "RHOB") delta = 0.05;
    else if (c.name == "NPHI") delta = 0.03;
    else if (c.name == "PEF") delta = 0.2;
    s.noise_variances.push_back((delta / 2.0) * (delta / 2.0));
  }
  const litho::SyntheticLayer layer = litho::generate_layer(s, table);
  fs::create_directories(out_dir);
  litho::save_logs_csv(layer.logs, (fs::path(out_dir) / "logs.csv").string());
  std::vector<std::string> names;
  for (const auto& c : table.components()) names.push_back(c.name);
  litho::save_volumes_csv(layer.logs.depths, layer.volumes, names,
                          (fs::path(out_dir) / "volumes.csv").string());
  std::printf("wrote %zu samples of '%s' to %s\n", layer.logs.depths.size(),
              scenario_name.c_str(), out_dir.c_str());
  return kExitOk;
}

int cmd_report(const std::string& report_path, const std::string& endpoints,
               const std::string& out_dir) {
  std::ifstream in(report_path);
  if (!in) throw litho::IoError("cannot open report: " + report_path);
  nlohmann::json doc = nlohmann::json::parse(in);
  if (doc.value("schema", "") != litho::kReportSchema)
    throw litho::IoError("unsupported report schema");
  const litho::EndpointTable table = litho::load_endpoint_table(endpoints);
  fs::create_directories(out_dir);
  for (const auto& layer : doc["layers"]) {
    const int id = layer["layer_id"].get<int>();
    std::size_t hi = 0;
    for (const auto& hyp : layer["hypotheses"]) {
      litho::Hypothesis h;
      h.cluster_id = hyp["cluster_id"].get<int>();
      h.size = hyp["size"].get<std::uint32_t>();
      h.p_hat = hyp["p_hat"].get<double>();
      for (const auto& comp : table.components()) {
        const auto& c = hyp["components"][comp.name];
        h.mean_volumes.push_back(c["mean"].get<double>());
        litho::ComponentQuantiles q;
        q.p5 = c["p5"].get<double>();
        q.p25 = c["p25"].get<double>();
        q.median = c["median"].get<double>();
        q.p75 = c["p75"].get<double>();
        q.p95 = c["p95"].get<double>();
        h.quantiles.push_back(q);
      }
      const std::string base = (fs::path(out_dir) /
          ("layer_" + std::to_string(id) + "_cluster" + std::to_string(hi))).string();
      litho::detail::plot_boxplot(base + "_boxplot.svg", h, table);
      ++hi;
    }
  }
  std::printf("plots re-rendered to %s\n", out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"litho: lithological hypothesis inference from wellbore logs"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags usable after the subcommand name

  std::string config_path, out_dir;
  long long seed = -1;
  unsigned threads = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--threads", threads, "worker threads override");
  app.add_flag("--print-config", print_config, "print a commented config template");

  CLI::App* invert = app.add_subcommand("invert", "run the full pipeline");
  CLI::App* segment = app.add_subcommand("segment", "PELT zonation only");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic well");
  std::string scenario = "Shaly-Sand 1";
  std::string endpoints = "data/endpoints_default.csv";
  long long n_samples = -1;
  std::vector<std::string> synth_curves{"GR", "RHOB", "NPHI"};
  synth->add_option("--scenario", scenario, "scenario name from the catalog");
  synth->add_option("--endpoints", endpoints, "endpoint table file");
  synth->add_option("--n", n_samples, "number of depth samples");
  synth->add_option("--curves", synth_curves, "curves to synthesize");

  CLI::App* report = app.add_subcommand("report", "re-render plots from report.json");
  std::string report_path = "out/report.json";
  report->add_option("--report", report_path, "saved report.json");
  report->add_option("--endpoints", endpoints, "endpoint table file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_config) {
      std::cout << litho::RunConfig::config_template();
      return kExitOk;
    }
    if (synth->parsed())
      return cmd_synth(scenario, endpoints, out_dir.empty() ? "synth_out" : out_dir,
                       seed, n_samples, synth_curves);
    if (report->parsed())
      return cmd_report(report_path, endpoints, out_dir.empty() ? "out" : out_dir);
    if (config_path.empty()) {
      std::cerr << "error: --config is required (see --print-config)\n";
      return kExitConfig;
    }
    litho::RunConfig run = load_run_config(config_path);
    apply_overrides(run, out_dir, seed, threads);
    if (segment->parsed()) return cmd_segment(run);
    if (invert->parsed()) return cmd_invert(run);
    std::cerr << "error: no subcommand given\n";
    return kExitConfig;
  } catch (const litho::IoError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
