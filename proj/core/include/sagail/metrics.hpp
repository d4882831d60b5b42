#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sagail {

// One evaluation row per completed training epoch.
struct EpochRow {
  int epoch = 0;
  std::uint64_t seed = 0;
  double success_rate = 0.0;
  double mean_return = 0.0;
  long admit_direct = 0;
  long admit_better = 0;
  long reject = 0;
  double disc_loss = 0.0;
  double delta_gail = 0.0;
  // Extra observability carried by the JSON run log, not the fixed CSV.
  double mean_d_min = 0.0;
  double re_mean_goal_distance = 0.0;
  long re_size = 0;
  double wall_seconds = 0.0;
};

// Fixed, versioned CSV schema (schema_version 1).
inline constexpr const char* kMetricsCsvHeader =
    "epoch,seed,success_rate,mean_return,admit_direct,admit_better,reject,disc_loss,delta_gail";

void write_metrics_csv(const std::vector<EpochRow>& rows, const std::string& path, bool append);
std::vector<EpochRow> read_metrics_csv(const std::string& path);

// Full per-epoch rows plus run metadata, as a JSON document.
void write_run_json(const std::vector<EpochRow>& rows, const std::string& config_json_text,
                    const std::vector<std::string>& modules, const std::string& path);

struct CurvePoint {
  int epoch = 0;
  int n_seeds = 0;
  double success_mean = 0.0, success_min = 0.0, success_max = 0.0;
  double return_mean = 0.0, return_min = 0.0, return_max = 0.0;
};

// Mean and range across seeds, aligned by epoch index.
std::vector<CurvePoint> aggregate_curves(const std::vector<std::vector<EpochRow>>& per_seed);

void write_curves_csv(const std::vector<CurvePoint>& curve, const std::string& path);

// Human-readable summary of one or more metrics CSVs: final/best success,
// and the first epoch from which success stays above the given thresholds.
std::string summarize_metrics(const std::vector<std::string>& csv_paths,
                              const std::vector<double>& thresholds = {0.6, 0.9});

// First epoch index e such that success_rate >= threshold for every epoch
// >= e; returns last_epoch + 1 when never sustained.
int first_sustained_epoch(const std::vector<EpochRow>& rows, double threshold);

}  // namespace sagail
