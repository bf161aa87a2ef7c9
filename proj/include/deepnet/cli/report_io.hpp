#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "deepnet/crossval.hpp"
#include "deepnet/metrics.hpp"
#include "deepnet/training.hpp"

namespace deepnet::cli {

nlohmann::json metrics_to_json(const MetricsReport& r, const std::vector<std::string>& class_names);
void print_metrics_table(std::ostream& os, const MetricsReport& r, const std::vector<std::string>& class_names);

// Columns: epoch,train_loss,train_acc,val_loss,val_acc. Comment lines (prefixed
// "# ") carry provenance. Missing validation values are left empty.
void write_history_csv(const std::filesystem::path& path, const TrainHistory& history,
                       const std::vector<std::string>& comments);

nlohmann::json crossval_to_json(const CrossValResult& r);
// One row per fold plus a final "mean" row.
void print_crossval_table(std::ostream& os, const CrossValResult& r);

nlohmann::json sweep_to_json(const SweepResult& r);
// Ranked by mean accuracy; the best point is marked with '*'.
void print_sweep_table(std::ostream& os, const SweepResult& r);
// Grid order, one line per point: the topology table layout for depth sweeps.
void print_topology_table(std::ostream& os, const SweepResult& r, const std::string& task);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace deepnet::cli
