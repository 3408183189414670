#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lawn/config.hpp"

namespace lawn {

inline constexpr int kMetricsSchemaVersion = 1;
inline constexpr int kTrajectorySchemaVersion = 1;

// One line of the per-episode metrics table. Wall-clock lives in a separate
// timings file so the metrics table stays byte-identical across reruns.
struct MetricsRow {
    int episode = 0;
    int steps = 0;
    double mean_reward = 0.0;
    double mean_s_total = 0.0;
    double s_total_sum = 0.0;
    int obstacle_violation_slots = 0;
    int boundary_violation_slots = 0;
    int uav_failures = 0;
    double wall_clock_ms = 0.0;
};

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
void write_timings_csv(const std::string& path, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

enum class BaselineKind { FixedUav, EqualBeam, RandomPolicy };
std::optional<BaselineKind> parse_baseline_kind(const std::string& name);

// Static deployment for the fixed-UAV scheme: a centered grid over the
// footprint at mid-altitude.
std::vector<Vec3> fixed_grid_deployment(const Workspace& w, int count);

// worker count for episode fan-out; reads the LAWNSIM_WORKERS variable
int worker_count();

// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::string> out_dir);
int cmd_eval(const std::string& config_path, const std::string& checkpoint_path, int episodes,
             std::optional<std::uint64_t> seed, std::optional<std::string> out_dir);
int cmd_baseline(const std::string& config_path, const std::string& kind, int episodes,
                 std::optional<std::uint64_t> seed, std::optional<std::string> out_dir,
                 bool eq23_literal = false);

// shared by cmd_eval/cmd_baseline and the acceptance suite
struct EvalSummary {
    std::vector<MetricsRow> rows;
    double mean_s_total_sum = 0.0;  // mean over episodes of per-episode S totals
};
EvalSummary run_policy_eval(const ExperimentConfig& cfg, HybridPolicy& policy, int episodes);
EvalSummary run_baseline(const ExperimentConfig& cfg, BaselineKind kind, int episodes);

}  // namespace lawn
