#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "deepnet/training.hpp"

namespace deepnet::cli {

inline constexpr const char* kConfigVersion = "deepnet-config-v1";

// Run configuration file (JSON). Every section and key is optional; unknown
// keys anywhere are rejected.
//
//   {
//     "version": "deepnet-config-v1",
//     "task": "incident_like" | "fraud_like" | "malware_like" | "custom",
//     "network": { "topology": "deepnet" | "depth-1".."depth-5",
//                  "batch_norm": true, "dropout": 0.01, "faithful_trailing_bn": false },
//     "train":   { "epochs": 500, "learning_rate": 0.1, "batch_size": 64, "seed": 0, "shuffle": true },
//     "data":    { "train_csv": "", "test_csv": "", "label_column": "label",
//                  "samples": 1000, "noise": <task default>, "vocab_size": 500,
//                  "test_fraction": 0.3, "seed": 7, "train_only_vocab": false },
//     "output":  { "dir": "out", "format": "table" | "json" }
//   }
//
// "custom" requires data.train_csv. Synthetic tasks generate data.samples rows
// with data.seed and split off data.test_fraction for testing, unless CSVs are given.
struct RunConfig {
  std::string task = "incident_like";
  std::string topology = "deepnet";
  bool batch_norm = true;
  double dropout = kDeepNetDropout;
  bool faithful_trailing_bn = false;

  TrainConfig train;

  std::string train_csv;
  std::string test_csv;
  std::string label_column = "label";
  std::size_t samples = 1000;
  std::optional<double> noise;
  std::size_t vocab_size = 500;
  double test_fraction = 0.3;
  std::uint64_t data_seed = 7;
  bool train_only_vocab = false;

  std::string out_dir = "out";
  std::string format = "table";

  // Throws ConfigError on any violated constraint.
  void validate() const;
  // Hidden plan implied by `topology`, batch_norm and dropout.
  NetworkConfig network_config(std::size_t input_dim, std::size_t num_classes) const;
};

// Throws ConfigError naming the offending key.
RunConfig run_config_from_json(const nlohmann::json& doc);
// Resolved config with every field present; embedded in artifacts.
nlohmann::json to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace deepnet::cli
