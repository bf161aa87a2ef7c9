#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "deepnet/model.hpp"

namespace deepnet {

// Version tag written into and required from every model file.
inline constexpr const char* kModelFormat = "deepnet-v1";

// Model files are JSON documents:
//
//   {
//     "format": "deepnet-v1",
//     "seed": <uint64>,
//     "config": { "input_dim", "num_classes", "hidden": [...], "dropout_rate",
//                 "batch_norm", "faithful_trailing_bn" },
//     "layers": [
//       { "type": "dense", "in": n, "out": m, "weights": [n*m row-major], "bias": [m] },
//       { "type": "activation", "kind": "relu" },
//       { "type": "batchnorm", "dim": d, "epsilon": e, "momentum": m,
//         "gamma": [d], "beta": [d], "running_mean": [d], "running_var": [d] },
//       { "type": "dropout", "rate": r },
//       ...
//     ],
//     "provenance": { ... }   // optional: the run config that produced the model
//   }
//
// Doubles are written in shortest round-trip form, so loading reproduces every
// parameter bit for bit.
nlohmann::json model_to_json(const Sequential& net, const nlohmann::json& provenance = nullptr);
// Throws ParseError naming the offending field path, or UnsupportedError on a
// format mismatch.
Sequential model_from_json(const nlohmann::json& doc);

void save_model(const Sequential& net, const std::filesystem::path& path,
                const nlohmann::json& provenance = nullptr);
Sequential load_model(const std::filesystem::path& path);

}  // namespace deepnet
