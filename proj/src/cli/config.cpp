#include "deepnet/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "deepnet/errors.hpp"
#include "deepnet/synthetic.hpp"

namespace deepnet::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.count(it.key()) == 0) throw ConfigError(path + "." + it.key() + ": unknown key");
  }
}

template <class T>
void read(const json& obj, const std::string& path, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  const std::string where = path + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) throw ConfigError(where + ": expected a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!it->is_string()) throw ConfigError(where + ": expected a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) throw ConfigError(where + ": expected a number");
  } else {
    if (!it->is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
  }
  out = it->get<T>();
}

}  // namespace

void RunConfig::validate() const {
  if (task != "custom") {
    try {
      task_from_string(task);
    } catch (const ArgumentError& e) {
      throw ConfigError(std::string("task: ") + e.what());
    }
  }
  if (task == "custom" && train_csv.empty()) throw ConfigError("task 'custom' needs data.train_csv");
  if (topology != "deepnet") {
    const bool ok = topology.size() == 7 && topology.rfind("depth-", 0) == 0 && topology[6] >= '1' &&
                    topology[6] <= '5';
    if (!ok) throw ConfigError("network.topology must be 'deepnet' or 'depth-1'..'depth-5', got '" + topology + "'");
  }
  if (faithful_trailing_bn) {
    throw ConfigError("network.faithful_trailing_bn builds an untrainable head; use it only for parameter tables");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("network.dropout must be in [0, 1)");
  try {
    train.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  if (samples < 10) throw ConfigError("data.samples must be at least 10, got " + std::to_string(samples));
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("data.test_fraction must be in (0, 1)");
  if (noise && !(*noise >= 0.0)) throw ConfigError("data.noise must be >= 0");
  if (format != "table" && format != "json") throw ConfigError("output.format must be 'table' or 'json'");
  if (out_dir.empty()) throw ConfigError("output.dir must not be empty");
}

NetworkConfig RunConfig::network_config(std::size_t input_dim, std::size_t num_classes) const {
  const std::size_t depth = topology == "deepnet" ? kDeepNetWidths.size() : static_cast<std::size_t>(topology[6] - '0');
  NetworkConfig cfg = topology_config(depth, input_dim, num_classes);
  cfg.batch_norm = batch_norm;
  cfg.dropout_rate = dropout;
  cfg.faithful_trailing_bn = faithful_trailing_bn;
  return cfg;
}

RunConfig run_config_from_json(const json& doc) {
  RunConfig c;
  reject_unknown(doc, "$", {"version", "task", "network", "train", "data", "output"});
  if (doc.contains("version")) {
    std::string v;
    read(doc, "$", "version", v);
    if (v != kConfigVersion) throw ConfigError("$.version: unsupported config version '" + v + "'");
  }
  read(doc, "$", "task", c.task);
  if (auto it = doc.find("network"); it != doc.end()) {
    reject_unknown(*it, "$.network", {"topology", "batch_norm", "dropout", "faithful_trailing_bn"});
    read(*it, "$.network", "topology", c.topology);
    read(*it, "$.network", "batch_norm", c.batch_norm);
    read(*it, "$.network", "dropout", c.dropout);
    read(*it, "$.network", "faithful_trailing_bn", c.faithful_trailing_bn);
  }
  if (auto it = doc.find("train"); it != doc.end()) {
    reject_unknown(*it, "$.train", {"epochs", "learning_rate", "batch_size", "seed", "shuffle"});
    read(*it, "$.train", "epochs", c.train.epochs);
    read(*it, "$.train", "learning_rate", c.train.learning_rate);
    read(*it, "$.train", "batch_size", c.train.batch_size);
    read(*it, "$.train", "seed", c.train.seed);
    read(*it, "$.train", "shuffle", c.train.shuffle);
  }
  if (auto it = doc.find("data"); it != doc.end()) {
    reject_unknown(*it, "$.data", {"train_csv", "test_csv", "label_column", "samples", "noise", "vocab_size",
                                   "test_fraction", "seed", "train_only_vocab"});
    read(*it, "$.data", "train_csv", c.train_csv);
    read(*it, "$.data", "test_csv", c.test_csv);
    read(*it, "$.data", "label_column", c.label_column);
    read(*it, "$.data", "samples", c.samples);
    if (it->contains("noise")) {
      double n = 0.0;
      read(*it, "$.data", "noise", n);
      c.noise = n;
    }
    read(*it, "$.data", "vocab_size", c.vocab_size);
    read(*it, "$.data", "test_fraction", c.test_fraction);
    read(*it, "$.data", "seed", c.data_seed);
    read(*it, "$.data", "train_only_vocab", c.train_only_vocab);
  }
  if (auto it = doc.find("output"); it != doc.end()) {
    reject_unknown(*it, "$.output", {"dir", "format"});
    read(*it, "$.output", "dir", c.out_dir);
    read(*it, "$.output", "format", c.format);
  }
  return c;
}

json to_json(const RunConfig& c) {
  json data = {{"train_csv", c.train_csv},         {"test_csv", c.test_csv},
               {"label_column", c.label_column},   {"samples", c.samples},
               {"vocab_size", c.vocab_size},       {"test_fraction", c.test_fraction},
               {"seed", c.data_seed},              {"train_only_vocab", c.train_only_vocab}};
  if (c.noise) data["noise"] = *c.noise;
  return {{"version", kConfigVersion},
          {"task", c.task},
          {"network",
           {{"topology", c.topology},
            {"batch_norm", c.batch_norm},
            {"dropout", c.dropout},
            {"faithful_trailing_bn", c.faithful_trailing_bn}}},
          {"train",
           {{"epochs", c.train.epochs},
            {"learning_rate", c.train.learning_rate},
            {"batch_size", c.train.batch_size},
            {"seed", c.train.seed},
            {"shuffle", c.train.shuffle}}},
          {"data", std::move(data)},
          {"output", {{"dir", c.out_dir}, {"format", c.format}}}};
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return run_config_from_json(doc);
}

}  // namespace deepnet::cli
