#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deepsc/metrics.hpp"

namespace deepsc::experiment {

struct NamedReport {
  std::string system;
  MetricReport report;
};

struct PlotFile {
  std::string name;  // e.g. "sdr_db_rician.csv"
  std::string content;
};

/// One file per (metric, channel): `snr_db,<system>...` rows over the union
/// SNR grid. Missing cells are empty. The PESQ files are skipped when no
/// report carries a score. Throws InvalidArgument on an empty input.
std::vector<PlotFile> plot_data(const std::vector<NamedReport>& reports);

/// `epoch,loss` rows.
std::string loss_csv(const std::vector<double>& epoch_loss);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace deepsc::experiment
