#include "sagail/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sagail {

using nlohmann::json;

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_metrics_csv(const std::vector<EpochRow>& rows, const std::string& path, bool append) {
  const bool fresh = !append || !std::ifstream(path).good();
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("write_metrics_csv: cannot open " + path);
  if (fresh) out << kMetricsCsvHeader << '\n';
  for (const EpochRow& r : rows) {
    out << r.epoch << ',' << r.seed << ',' << fmt_double(r.success_rate) << ','
        << fmt_double(r.mean_return) << ',' << r.admit_direct << ',' << r.admit_better << ','
        << r.reject << ',' << fmt_double(r.disc_loss) << ',' << fmt_double(r.delta_gail) << '\n';
  }
}

std::vector<EpochRow> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_metrics_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_metrics_csv: empty file " + path);
  if (line != kMetricsCsvHeader)
    throw std::runtime_error("read_metrics_csv: unexpected header in " + path);
  std::vector<EpochRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw std::runtime_error("read_metrics_csv: bad row at line " + std::to_string(lineno));
    EpochRow r;
    r.epoch = std::stoi(fields[0]);
    r.seed = std::stoull(fields[1]);
    r.success_rate = std::stod(fields[2]);
    r.mean_return = std::stod(fields[3]);
    r.admit_direct = std::stol(fields[4]);
    r.admit_better = std::stol(fields[5]);
    r.reject = std::stol(fields[6]);
    r.disc_loss = std::stod(fields[7]);
    r.delta_gail = std::stod(fields[8]);
    rows.push_back(r);
  }
  return rows;
}

void write_run_json(const std::vector<EpochRow>& rows, const std::string& config_json_text,
                    const std::vector<std::string>& modules, const std::string& path) {
  json j;
  j["kind"] = "run_log";
  j["schema_version"] = 1;
  j["config"] = json::parse(config_json_text);
  j["modules"] = modules;
  json jrows = json::array();
  for (const EpochRow& r : rows) {
    jrows.push_back(json{{"epoch", r.epoch},
                         {"seed", r.seed},
                         {"success_rate", r.success_rate},
                         {"mean_return", r.mean_return},
                         {"admit_direct", r.admit_direct},
                         {"admit_better", r.admit_better},
                         {"reject", r.reject},
                         {"disc_loss", r.disc_loss},
                         {"delta_gail", r.delta_gail},
                         {"mean_d_min", r.mean_d_min},
                         {"re_mean_goal_distance", r.re_mean_goal_distance},
                         {"re_size", r.re_size},
                         {"wall_seconds", r.wall_seconds}});
  }
  j["epochs"] = std::move(jrows);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_run_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

std::vector<CurvePoint> aggregate_curves(const std::vector<std::vector<EpochRow>>& per_seed) {
  std::map<int, CurvePoint> points;
  for (const auto& rows : per_seed) {
    for (const EpochRow& r : rows) {
      auto [it, fresh] = points.try_emplace(r.epoch);
      CurvePoint& p = it->second;
      if (fresh) {
        p.epoch = r.epoch;
        p.success_min = p.success_max = r.success_rate;
        p.return_min = p.return_max = r.mean_return;
      }
      p.success_mean += r.success_rate;
      p.return_mean += r.mean_return;
      p.success_min = std::min(p.success_min, r.success_rate);
      p.success_max = std::max(p.success_max, r.success_rate);
      p.return_min = std::min(p.return_min, r.mean_return);
      p.return_max = std::max(p.return_max, r.mean_return);
      ++p.n_seeds;
    }
  }
  std::vector<CurvePoint> curve;
  curve.reserve(points.size());
  for (auto& [epoch, p] : points) {
    p.success_mean /= p.n_seeds;
    p.return_mean /= p.n_seeds;
    curve.push_back(p);
  }
  return curve;
}

void write_curves_csv(const std::vector<CurvePoint>& curve, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curves_csv: cannot open " + path);
  out << "epoch,n_seeds,success_mean,success_min,success_max,return_mean,return_min,return_max\n";
  for (const CurvePoint& p : curve) {
    out << p.epoch << ',' << p.n_seeds << ',' << fmt_double(p.success_mean) << ','
        << fmt_double(p.success_min) << ',' << fmt_double(p.success_max) << ','
        << fmt_double(p.return_mean) << ',' << fmt_double(p.return_min) << ','
        << fmt_double(p.return_max) << '\n';
  }
}

int first_sustained_epoch(const std::vector<EpochRow>& rows, double threshold) {
  if (rows.empty()) return 1;
  int sustained_from = rows.back().epoch + 1;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->success_rate >= threshold)
      sustained_from = it->epoch;
    else
      break;
  }
  return sustained_from;
}

std::string summarize_metrics(const std::vector<std::string>& csv_paths,
                              const std::vector<double>& thresholds) {
  std::ostringstream os;
  os << "file                                    epochs  final   best ";
  for (double th : thresholds) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " >=%2.0f%%", th * 100);
    os << buf;
  }
  os << '\n';
  for (const std::string& path : csv_paths) {
    const std::vector<EpochRow> rows = read_metrics_csv(path);
    double best = 0.0;
    for (const EpochRow& r : rows) best = std::max(best, r.success_rate);
    char buf[64];
    std::string name = path;
    if (name.size() > 38) name = "..." + name.substr(name.size() - 35);
    std::snprintf(buf, sizeof(buf), "%-38s %6zu  %5.3f  %5.3f", name.c_str(), rows.size(),
                  rows.empty() ? 0.0 : rows.back().success_rate, best);
    os << buf;
    for (double th : thresholds) {
      const int e = first_sustained_epoch(rows, th);
      const bool reached = !rows.empty() && e <= rows.back().epoch;
      if (reached)
        std::snprintf(buf, sizeof(buf), " %5d", e);
      else
        std::snprintf(buf, sizeof(buf), "     -");
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sagail
