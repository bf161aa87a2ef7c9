#include "deepnet/model_io.hpp"

#include <fstream>
#include <sstream>

#include "deepnet/errors.hpp"

namespace deepnet {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json values(const Matrix& m) { return json(m.storage()); }

json config_to_json(const NetworkConfig& c) {
  return {{"input_dim", c.input_dim},     {"num_classes", c.num_classes},
          {"hidden", c.hidden},           {"dropout_rate", c.dropout_rate},
          {"batch_norm", c.batch_norm},   {"faithful_trailing_bn", c.faithful_trailing_bn}};
}

// Field access that reports the JSON path of whatever is missing or mistyped.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& at(const std::string& key) const {
    if (!node_.is_object()) throw ParseError(path_ + ": expected an object");
    auto it = node_.find(key);
    if (it == node_.end()) throw ParseError(path_ + "." + key + ": missing field");
    return *it;
  }

  Reader child(const std::string& key) const { return {at(key), path_ + "." + key}; }

  std::size_t count(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ParseError(path_ + "." + key + ": expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::uint64_t u64(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ParseError(path_ + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ParseError(path_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  bool boolean(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_boolean()) throw ParseError(path_ + "." + key + ": expected a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError(path_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  Matrix matrix(const std::string& key, std::size_t rows, std::size_t cols) const {
    const json& v = at(key);
    const std::string p = path_ + "." + key;
    if (!v.is_array()) throw ParseError(p + ": expected an array");
    if (v.size() != rows * cols) {
      throw ParseError(p + ": expected " + std::to_string(rows * cols) + " values, found " +
                       std::to_string(v.size()));
    }
    std::vector<double> data(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ParseError(p + "[" + std::to_string(i) + "]: expected a number");
      data[i] = v[i].get<double>();
    }
    return Matrix(rows, cols, std::move(data));
  }

  const std::string& path() const noexcept { return path_; }

 private:
  const json& node_;
  std::string path_;
};

NetworkConfig config_from_json(const Reader& r) {
  NetworkConfig c;
  c.input_dim = r.count("input_dim");
  c.num_classes = r.count("num_classes");
  const json& hidden = r.at("hidden");
  if (!hidden.is_array()) throw ParseError(r.path() + ".hidden: expected an array");
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    if (!hidden[i].is_number_unsigned()) {
      throw ParseError(r.path() + ".hidden[" + std::to_string(i) + "]: expected a positive integer");
    }
    c.hidden.push_back(hidden[i].get<std::size_t>());
  }
  c.dropout_rate = r.number("dropout_rate");
  c.batch_norm = r.boolean("batch_norm");
  c.faithful_trailing_bn = r.boolean("faithful_trailing_bn");
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(r.path() + ": " + e.what());
  }
  return c;
}

Layer layer_from_json(const Reader& r) {
  const std::string type = r.string("type");
  if (type == "dense") {
    const std::size_t in = r.count("in");
    const std::size_t out = r.count("out");
    return DenseLayer(r.matrix("weights", in, out), r.matrix("bias", 1, out));
  }
  if (type == "batchnorm") {
    const std::size_t dim = r.count("dim");
    BatchNormLayer bn(dim, r.number("epsilon"), r.number("momentum"));
    bn.gamma() = r.matrix("gamma", 1, dim);
    bn.beta() = r.matrix("beta", 1, dim);
    bn.running_mean() = r.matrix("running_mean", 1, dim);
    bn.running_var() = r.matrix("running_var", 1, dim);
    return bn;
  }
  if (type == "dropout") return DropoutLayer(r.number("rate"));
  if (type == "activation") {
    try {
      return ActivationLayer(activation_from_string(r.string("kind")));
    } catch (const ParseError& e) {
      throw ParseError(r.path() + ".kind: " + e.what());
    }
  }
  throw ParseError(r.path() + ".type: unknown layer type '" + type + "'");
}

// Type tag plus shape, used to compare a loaded stack against its config.
std::string signature(const Layer& layer) {
  return std::visit(overloaded{
                        [](const DenseLayer& l) {
                          return "dense " + std::to_string(l.in_dim()) + "x" + std::to_string(l.out_dim());
                        },
                        [](const BatchNormLayer& l) { return "batchnorm " + std::to_string(l.dim()); },
                        [](const DropoutLayer& l) { return "dropout " + std::to_string(l.rate()); },
                        [](const ActivationLayer& l) { return "activation " + std::string(to_string(l.kind())); },
                    },
                    layer);
}

}  // namespace

json model_to_json(const Sequential& net, const json& provenance) {
  json layers = json::array();
  for (const Layer& layer : net.layers()) {
    layers.push_back(std::visit(
        overloaded{
            [](const DenseLayer& l) -> json {
              return {{"type", "dense"},
                      {"in", l.in_dim()},
                      {"out", l.out_dim()},
                      {"weights", values(l.weights())},
                      {"bias", values(l.bias())}};
            },
            [](const BatchNormLayer& l) -> json {
              return {{"type", "batchnorm"},          {"dim", l.dim()},
                      {"epsilon", l.epsilon()},       {"momentum", l.momentum()},
                      {"gamma", values(l.gamma())},   {"beta", values(l.beta())},
                      {"running_mean", values(l.running_mean())},
                      {"running_var", values(l.running_var())}};
            },
            [](const DropoutLayer& l) -> json { return {{"type", "dropout"}, {"rate", l.rate()}}; },
            [](const ActivationLayer& l) -> json {
              return {{"type", "activation"}, {"kind", std::string(to_string(l.kind()))}};
            },
        },
        layer));
  }
  json doc = {{"format", kModelFormat},
              {"seed", net.seed()},
              {"config", config_to_json(net.config())},
              {"layers", std::move(layers)}};
  if (!net.class_names().empty()) doc["class_names"] = net.class_names();
  if (!provenance.is_null()) doc["provenance"] = provenance;
  return doc;
}

Sequential model_from_json(const json& doc) {
  const Reader root(doc, "$");
  const std::string format = root.string("format");
  if (format != kModelFormat) {
    throw UnsupportedError("unsupported model format '" + format + "', expected '" + kModelFormat + "'");
  }
  const NetworkConfig config = config_from_json(root.child("config"));
  const std::uint64_t seed = root.u64("seed");

  const json& items = root.at("layers");
  if (!items.is_array()) throw ParseError("$.layers: expected an array");
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      layers.push_back(layer_from_json(Reader(items[i], "$.layers[" + std::to_string(i) + "]")));
    } catch (const ArgumentError& e) {
      throw ParseError("$.layers[" + std::to_string(i) + "]: " + e.what());
    } catch (const ShapeError& e) {
      throw ParseError("$.layers[" + std::to_string(i) + "]: " + e.what());
    }
  }

  // The stack must be exactly what the config builds.
  const Sequential skeleton = build_network(config, 0);
  if (skeleton.layers().size() != layers.size()) {
    throw ParseError("$.layers: config implies " + std::to_string(skeleton.layers().size()) +
                     " layers, file has " + std::to_string(layers.size()));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (signature(layers[i]) != signature(skeleton.layers()[i])) {
      throw ParseError("$.layers[" + std::to_string(i) + "]: found " + signature(layers[i]) +
                       ", config implies " + signature(skeleton.layers()[i]));
    }
  }
  Sequential net(config, std::move(layers), seed);
  if (doc.contains("class_names")) {
    const json& names = doc["class_names"];
    if (!names.is_array() || names.size() != config.num_classes) {
      throw ParseError("$.class_names: expected an array of " + std::to_string(config.num_classes) + " strings");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!names[i].is_string()) throw ParseError("$.class_names[" + std::to_string(i) + "]: expected a string");
      out.push_back(names[i].get<std::string>());
    }
    net.set_class_names(std::move(out));
  }
  return net;
}

void save_model(const Sequential& net, const std::filesystem::path& path, const json& provenance) {
  for (const Matrix* p : net.parameters()) {
    if (!all_finite(*p)) throw DataError("refusing to save a model with non-finite parameters");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << model_to_json(net, provenance).dump() << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Sequential load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace deepnet
