#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "deepsc/error.hpp"
#include "deepsc/experiment/config.hpp"
#include "deepsc/experiment/report.hpp"
#include "deepsc/experiment/runner.hpp"
#include "deepsc/flops.hpp"
#include "deepsc/pesq.hpp"

namespace fs = std::filesystem;
using namespace deepsc;
using namespace deepsc::experiment;

namespace {

struct Common {
  std::string config;
  std::string out = "run";
  std::string scenario;
  std::string system;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--config", c.config, "Experiment config file (key = value)")->check(CLI::ExistingFile);
  if (with_out) cmd->add_option("--out", c.out, "Run directory")->capture_default_str();
  cmd->add_option("--scenario", c.scenario, "telephone | multimedia")
      ->check(CLI::IsMember({"telephone", "multimedia"}));
  cmd->add_option("--system", c.system, "deepsc-s | cnn-only | classic | semi-traditional")
      ->check(CLI::IsMember({"deepsc-s", "cnn-only", "classic", "semi-traditional"}));
  cmd->add_option("--seed", c.seed, "Seed for data, initialization and channel draws");
  cmd->add_option("--set", c.overrides, "Extra config entries, key=value (repeatable)");
}

ExperimentConfig resolve(const Common& c) {
  KeyValues kv = c.config.empty() ? KeyValues{} : KeyValues::load(c.config);
  if (!c.scenario.empty()) kv.set("scenario", c.scenario);
  if (!c.system.empty()) kv.set("system", c.system);
  if (c.seed) kv.set("seed", static_cast<unsigned long long>(*c.seed));
  for (const auto& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + o + "'");
    kv.set(std::string(trim(o.substr(0, eq))), std::string(trim(o.substr(eq + 1))));
  }
  auto cfg = ExperimentConfig::from_keyvalues(kv);
  // An explicit seed wins over per-section seeds in the file.
  if (c.seed) cfg.apply_seed(*c.seed);
  return cfg;
}

void log_line(const std::string& msg) { std::fprintf(stderr, "%s\n", msg.c_str()); }

void print_flops(const ExperimentConfig& cfg) {
  const auto f = flops_model(cfg.model);
  std::printf("variant,%s\nscenario,%s\n", model::to_string(cfg.model.variant).c_str(), to_string(cfg.scenario).c_str());
  std::printf("layer,side,cin,cout,kernel,extra,flops\n");
  for (const auto& item : f.items) {
    const bool tx = item.layer.group == model::Group::Alpha || item.layer.group == model::Group::Beta;
    std::printf("%s,%s,%zu,%zu,%zu,%d,%llu\n", item.layer.name.c_str(), tx ? "tx" : "rx", item.layer.cin,
                item.layer.cout, item.layer.kernel, item.layer.extra ? 1 : 0,
                static_cast<unsigned long long>(item.flops));
  }
  std::printf("transmitter,%llu\nreceiver,%llu\ntotal,%llu\ntransmitter_extras,%llu\nreceiver_extras,%llu\n",
              static_cast<unsigned long long>(f.transmitter), static_cast<unsigned long long>(f.receiver),
              static_cast<unsigned long long>(f.total), static_cast<unsigned long long>(f.transmitter_extras),
              static_cast<unsigned long long>(f.receiver_extras));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DeepSC-S speech semantic communication simulator"};
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + kPesqEnvVar + " = path of an external PESQ evaluator");

  Common train_opts, eval_opts, classic_opts, flops_opts;
  std::string checkpoint;
  std::string plot_out = "plots";
  std::vector<std::string> plot_inputs;

  auto* train = app.add_subcommand("train", "Train a model; writes model.ckpt and loss.csv");
  add_common(train, train_opts);
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint over the channel/SNR grid");
  add_common(eval, eval_opts);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint from 'train'")->required()->check(CLI::ExistingFile);
  auto* classic = app.add_subcommand("classic", "Evaluate the PCM + turbo + 64-QAM baseline");
  add_common(classic, classic_opts);
  auto* flops = app.add_subcommand("flops", "Print the FLOPs breakdown of a model variant");
  add_common(flops, flops_opts, false);
  auto* plot = app.add_subcommand("plotdata", "Merge metric CSVs into per-(metric, channel) plot files");
  plot->add_option("--out", plot_out, "Output directory")->capture_default_str();
  plot->add_option("inputs", plot_inputs, "Metric CSVs, optionally as system=path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const auto cfg = resolve(train_opts);
      const auto path = run_train(cfg, train_opts.out, log_line);
      std::printf("%s\n", path.string().c_str());
    } else if (*eval) {
      const auto cfg = resolve(eval_opts);
      run_eval(cfg, checkpoint, eval_opts.out, log_line);
      std::printf("%s\n", (fs::path(eval_opts.out) / metrics_file_name(cfg.system)).string().c_str());
    } else if (*classic) {
      auto opts = classic_opts;
      opts.system = "classic";
      const auto cfg = resolve(opts);
      run_classic(cfg, opts.out, log_line);
      std::printf("%s\n", (fs::path(opts.out) / metrics_file_name(cfg.system)).string().c_str());
    } else if (*flops) {
      auto opts = flops_opts;
      if (opts.system == "classic") throw InvalidArgument("the classic system has no FLOPs model");
      print_flops(resolve(opts));
    } else if (*plot) {
      std::vector<NamedReport> reports;
      for (const auto& in : plot_inputs) {
        NamedReport r;
        std::string path = in;
        if (const auto eq = in.find('='); eq != std::string::npos) {
          r.system = in.substr(0, eq);
          path = in.substr(eq + 1);
        } else {
          r.system = fs::path(in).stem().string();
          if (r.system.starts_with("metrics_")) r.system = r.system.substr(8);
        }
        r.report = parse_metric_csv(read_text(path));
        reports.push_back(std::move(r));
      }
      fs::create_directories(plot_out);
      for (const auto& f : plot_data(reports)) {
        write_text(fs::path(plot_out) / f.name, f.content);
        std::printf("%s\n", (fs::path(plot_out) / f.name).string().c_str());
      }
    }
  } catch (const deepsc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
