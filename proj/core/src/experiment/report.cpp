#include "deepsc/experiment/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "deepsc/error.hpp"

namespace deepsc::experiment {

namespace {

std::string fmt(double v, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::vector<PlotFile> plot_data(const std::vector<NamedReport>& reports) {
  bool any_rows = false, any_pesq = false;
  std::vector<std::string> channels;
  std::vector<double> snrs;
  for (const auto& r : reports) {
    for (const auto& row : r.report.rows) {
      any_rows = true;
      any_pesq |= row.pesq.has_value();
      const auto name = channel::to_string(row.channel);
      if (std::find(channels.begin(), channels.end(), name) == channels.end()) channels.push_back(name);
      if (std::find(snrs.begin(), snrs.end(), row.snr_db) == snrs.end()) snrs.push_back(row.snr_db);
    }
  }
  if (!any_rows) throw InvalidArgument("plotdata: no report rows");
  std::sort(snrs.begin(), snrs.end());

  struct Metric {
    const char* name;
    const char* spec;
    std::optional<double> (*get)(const MetricRow&);
  };
  std::vector<Metric> metrics = {
      {"sdr_db", "%.6f", [](const MetricRow& r) -> std::optional<double> { return r.sdr_db; }},
      {"mse", "%.9e", [](const MetricRow& r) -> std::optional<double> { return r.mse; }},
  };
  if (any_pesq) metrics.push_back({"pesq", "%.4f", [](const MetricRow& r) { return r.pesq; }});

  std::vector<PlotFile> out;
  for (const auto& m : metrics) {
    for (const auto& ch : channels) {
      std::string text = "snr_db";
      for (const auto& r : reports) text += "," + r.system;
      text += "\n";
      for (double snr : snrs) {
        text += fmt(snr, "%.2f");
        for (const auto& r : reports) {
          text += ",";
          for (const auto& row : r.report.rows) {
            if (channel::to_string(row.channel) == ch && row.snr_db == snr) {
              if (const auto v = m.get(row)) text += fmt(*v, m.spec);
              break;
            }
          }
        }
        text += "\n";
      }
      std::string file = std::string(m.name) + "_" + ch + ".csv";
      std::replace(file.begin(), file.end(), ':', '_');
      out.push_back({file, std::move(text)});
    }
  }
  return out;
}

std::string loss_csv(const std::vector<double>& epoch_loss) {
  std::string out = "epoch,loss\n";
  for (std::size_t i = 0; i < epoch_loss.size(); ++i) out += std::to_string(i + 1) + "," + fmt(epoch_loss[i], "%.9e") + "\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace deepsc::experiment
