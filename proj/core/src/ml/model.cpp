// Copyright (c) 2026 The respscreen Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "respscreen/ml/model.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "json.hpp"
#include "respscreen/error.hpp"
#include "respscreen/text.hpp"

namespace respscreen::ml {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kMagic = "RESPSCREEN-MODEL";

json platt_json(const std::optional<PlattCalibrator>& p) {
  if (!p) return nullptr;
  return json{{"a", p->a}, {"b", p->b}};
}

std::optional<PlattCalibrator> platt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return PlattCalibrator{j.at("a").get<double>(), j.at("b").get<double>()};
}

json model_json(const TrainedModel& m) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          return {{"kind", v.kind == LinearKind::kLogistic ? "logistic" : "linear_svm"},
                  {"weights", v.weights},
                  {"bias", v.bias},
                  {"lambda", v.lambda},
                  {"platt", platt_json(v.platt)}};
        } else if constexpr (std::is_same_v<T, KernelModel>) {
          return {{"support_vectors",
                   {{"rows", v.support_vectors.rows},
                    {"cols", v.support_vectors.cols},
                    {"data", v.support_vectors.data}}},
                  {"coef", v.coef},
                  {"bias", v.bias},
                  {"gamma", v.gamma},
                  {"lambda", v.lambda},
                  {"platt", platt_json(v.platt)}};
        } else {
          json nodes = json::array();
          for (const auto& n : v.nodes) {
            nodes.push_back({n.feature, n.child0, n.child1, n.probability, n.weight, n.samples});
          }
          return {{"feature_count", v.feature_count},
                  {"min_samples_leaf", v.min_samples_leaf},
                  {"nodes", nodes}};
        }
      },
      m.model);
}

std::variant<LinearModel, KernelModel, TreeModel> model_from(ModelFamily family, const json& j) {
  switch (family) {
    case ModelFamily::kLogistic:
    case ModelFamily::kLinearSvm: {
      LinearModel m;
      m.kind = j.at("kind").get<std::string>() == "logistic" ? LinearKind::kLogistic
                                                              : LinearKind::kLinearSvm;
      m.weights = j.at("weights").get<std::vector<double>>();
      m.bias = j.at("bias").get<double>();
      m.lambda = j.at("lambda").get<double>();
      m.platt = platt_from(j.at("platt"));
      return m;
    }
    case ModelFamily::kRbfSvm: {
      KernelModel m;
      const auto& sv = j.at("support_vectors");
      m.support_vectors.rows = sv.at("rows").get<std::size_t>();
      m.support_vectors.cols = sv.at("cols").get<std::size_t>();
      m.support_vectors.data = sv.at("data").get<std::vector<double>>();
      require(m.support_vectors.data.size() == m.support_vectors.rows * m.support_vectors.cols,
              ErrorKind::kFormat, "model file: support vector shape mismatch");
      m.coef = j.at("coef").get<std::vector<double>>();
      require(m.coef.size() == m.support_vectors.rows, ErrorKind::kFormat,
              "model file: coefficient count mismatch");
      m.bias = j.at("bias").get<double>();
      m.gamma = j.at("gamma").get<double>();
      m.lambda = j.at("lambda").get<double>();
      m.platt = platt_from(j.at("platt"));
      return m;
    }
    case ModelFamily::kTree: {
      TreeModel m;
      m.feature_count = j.at("feature_count").get<std::size_t>();
      m.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
      for (const auto& n : j.at("nodes")) {
        TreeNode t;
        t.feature = n.at(0).get<int>();
        t.child0 = n.at(1).get<int>();
        t.child1 = n.at(2).get<int>();
        t.probability = n.at(3).get<double>();
        t.weight = n.at(4).get<double>();
        t.samples = n.at(5).get<std::size_t>();
        m.nodes.push_back(t);
      }
      const auto count = static_cast<int>(m.nodes.size());
      for (const auto& t : m.nodes) {
        require(t.is_leaf() || (t.feature < static_cast<int>(m.feature_count) && t.child0 > 0 &&
                                t.child0 < count && t.child1 > 0 && t.child1 < count),
                ErrorKind::kFormat, "model file: malformed tree node");
      }
      return m;
    }
  }
  fail(ErrorKind::kFormat, "model file: unknown family");
}

}  // namespace

std::string_view family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::kLogistic: return "logistic";
    case ModelFamily::kLinearSvm: return "linear_svm";
    case ModelFamily::kRbfSvm: return "rbf_svm";
    case ModelFamily::kTree: return "tree";
  }
  return "unknown";
}

ModelFamily parse_family(std::string_view name) {
  for (auto f : {ModelFamily::kLogistic, ModelFamily::kLinearSvm, ModelFamily::kRbfSvm,
                 ModelFamily::kTree}) {
    if (family_name(f) == name) return f;
  }
  if (name == "lr") return ModelFamily::kLogistic;
  if (name == "svm" || name == "lsvm") return ModelFamily::kLinearSvm;
  if (name == "rbf") return ModelFamily::kRbfSvm;
  if (name == "dt" || name == "decision_tree") return ModelFamily::kTree;
  fail(ErrorKind::kConfig, "unknown model family '" + std::string(name) +
                               "' (expected logistic, linear_svm, rbf_svm or tree)");
}

std::size_t TrainedModel::input_dims() const {
  if (standardizer) return standardizer->mean.size();
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearModel>) return v.weights.size();
        else if constexpr (std::is_same_v<T, KernelModel>) return v.support_vectors.cols;
        else return v.feature_count;
      },
      model);
}

double TrainedModel::score(std::span<const double> x) const {
  require(x.size() == input_dims(), ErrorKind::kData,
          "model expects " + std::to_string(input_dims()) + " input dims, got " +
              std::to_string(x.size()));
  std::vector<double> z;
  std::span<const double> in = x;
  if (standardizer) {
    z = standardizer->apply(x);
    in = z;
  }
  const double p = std::visit([&](const auto& v) { return v.score(in); }, model);
  require(std::isfinite(p), ErrorKind::kCompute, "non-finite score");
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> TrainedModel::score(const Matrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = score(x.row(i));
  return out;
}

TrainedModel fit_model(ModelFamily family, const Matrix& x, std::span<const int> labels,
                       const Hyperparameters& hp, const TrainOptions& options,
                       const Matrix* standardized_gram) {
  require(x.rows == labels.size(), ErrorKind::kData, "rows and labels differ in length");
  TrainedModel m;
  m.family = family;
  m.hyperparameters = hp;
  m.metadata["balanced"] = options.balanced ? "true" : "false";
  if (family == ModelFamily::kTree) {
    m.model = train_tree(x, labels, hp.min_samples_leaf, options.balanced);
    return m;
  }
  check_binary_labels(labels);
  m.standardizer = fit_standardizer(x);
  const Matrix z = m.standardizer->apply(x);
  switch (family) {
    case ModelFamily::kLogistic:
      m.model = train_logistic(z, labels, hp.lambda, options.balanced, options.logistic);
      m.metadata["gradient_tolerance"] = format_double(options.logistic.gradient_tolerance);
      m.metadata["max_iterations"] = std::to_string(options.logistic.max_iterations);
      break;
    case ModelFamily::kLinearSvm:
      m.model = train_linear_svm(z, labels, hp.lambda, options.balanced, options.svm,
                                 standardized_gram);
      break;
    case ModelFamily::kRbfSvm:
      m.model = train_rbf_svm(z, labels, hp.lambda, hp.gamma, options.balanced, options.svm,
                              standardized_gram);
      break;
    case ModelFamily::kTree:
      break;
  }
  if (family != ModelFamily::kLogistic) {
    m.metadata["kkt_tolerance"] = format_double(options.svm.smo.tolerance);
    m.metadata["calibration_folds"] = std::to_string(options.svm.calibration_folds);
  }
  return m;
}

std::string serialize_model(const TrainedModel& m) {
  json j;
  j["format"] = "respscreen-model";
  j["version"] = kModelFormatVersion;
  j["family"] = family_name(m.family);
  j["layout_id"] = m.layout_id;
  j["hyperparameters"] = {{"lambda", m.hyperparameters.lambda},
                          {"gamma", m.hyperparameters.gamma},
                          {"min_samples_leaf", m.hyperparameters.min_samples_leaf}};
  if (m.standardizer) {
    j["standardizer"] = {{"mean", m.standardizer->mean}, {"scale", m.standardizer->scale}};
  } else {
    j["standardizer"] = nullptr;
  }
  j["model"] = model_json(m);
  j["training_ids"] = m.training_ids;
  j["metadata"] = m.metadata;
  const std::string body = j.dump(1) + "\n";
  return std::string(kMagic) + " " + std::to_string(kModelFormatVersion) + "\nchecksum " +
         Fnv1a().update(body).hex() + "\n" + body;
}

TrainedModel deserialize_model(std::string_view text) {
  auto next_line = [&](std::string_view& rest) {
    const auto nl = rest.find('\n');
    require(nl != std::string_view::npos, ErrorKind::kFormat, "model file truncated");
    auto line = rest.substr(0, nl);
    rest.remove_prefix(nl + 1);
    return line;
  };
  std::string_view rest = text;
  const auto header = next_line(rest);
  require(header.starts_with(kMagic), ErrorKind::kFormat, "not a respscreen model file");
  const auto version = header.substr(kMagic.size());
  require(trim(version) == std::to_string(kModelFormatVersion), ErrorKind::kFormat,
          "unsupported model format version '" + trim(version) + "'");
  const auto sum_line = next_line(rest);
  require(sum_line.starts_with("checksum "), ErrorKind::kFormat, "model file lacks a checksum");
  const auto expected = trim(sum_line.substr(9));
  require(Fnv1a().update(rest).hex() == expected, ErrorKind::kFormat,
          "model file checksum mismatch (file corrupted or edited)");

  try {
    const json j = json::parse(rest);
    TrainedModel m;
    m.family = parse_family(j.at("family").get<std::string>());
    m.layout_id = j.at("layout_id").get<std::string>();
    const auto& hp = j.at("hyperparameters");
    m.hyperparameters = {hp.at("lambda").get<double>(), hp.at("gamma").get<double>(),
                         hp.at("min_samples_leaf").get<std::size_t>()};
    if (!j.at("standardizer").is_null()) {
      m.standardizer = Standardizer{j["standardizer"].at("mean").get<std::vector<double>>(),
                                    j["standardizer"].at("scale").get<std::vector<double>>()};
    }
    m.model = model_from(m.family, j.at("model"));
    m.training_ids = j.at("training_ids").get<std::vector<std::string>>();
    m.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::kFormat, std::string("model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  write_file(path.string(), serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  return deserialize_model(read_file(path.string()));
}

void check_layout(const TrainedModel& model, std::string_view layout_id) {
  require(model.layout_id == layout_id, ErrorKind::kFormat,
          "feature layout mismatch: model was trained on '" + model.layout_id +
              "', features use '" + std::string(layout_id) + "'");
}

}  // namespace respscreen::ml
