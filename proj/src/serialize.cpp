#include "evident/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "evident/errors.hpp"
#include "evident/version.hpp"

namespace evident {

namespace {

using nlohmann::json;

void require_object(const json& j, const char* what) {
  if (!j.is_object()) {
    throw validation_error(std::string(what) + ": expected a JSON object");
  }
}

// Rejects fields outside the allowed set; wire formats stay closed.
void require_only(const json& j, std::initializer_list<const char*> allowed,
                  const char* what) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* name : allowed) {
      if (key == name) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw validation_error(std::string(what) + ": unknown field '" + key + "'");
    }
  }
}

const json& require_field(const json& j, const char* name, const char* what) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw validation_error(std::string(what) + ": missing field '" + name + "'");
  }
  return *it;
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) {
    throw validation_error(std::string(what) + ": expected an array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw validation_error(std::string(what) + ": non-numeric array entry");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::size_t> index_array(const json& j, const char* what) {
  if (!j.is_array()) {
    throw validation_error(std::string(what) + ": expected an array of indices");
  }
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) {
      throw validation_error(std::string(what) + ": indices must be non-negative integers");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

}  // namespace

nlohmann::json opinion_to_json(const DirichletOpinion& o) {
  return json{{"beliefs", o.beliefs}, {"uncertainty", o.uncertainty}};
}

DirichletOpinion opinion_from_json(const nlohmann::json& j) {
  require_object(j, "opinion");
  require_only(j, {"beliefs", "uncertainty"}, "opinion");
  DirichletOpinion o;
  o.beliefs = number_array(require_field(j, "beliefs", "opinion"), "opinion.beliefs");
  const json& u = require_field(j, "uncertainty", "opinion");
  if (!u.is_number()) {
    throw validation_error("opinion.uncertainty: expected a number");
  }
  o.uncertainty = u.get<double>();
  o.validate();
  return o;
}

nlohmann::json evidence_to_json(const Evidence& e) {
  return json{{"evidence", e.values}};
}

Evidence evidence_from_json(const nlohmann::json& j) {
  require_object(j, "evidence");
  require_only(j, {"evidence"}, "evidence");
  Evidence e;
  e.values = number_array(require_field(j, "evidence", "evidence"), "evidence");
  e.validate();
  return e;
}

std::vector<DirichletOpinion> opinions_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw validation_error("opinions: expected a JSON array of opinion objects");
  }
  std::vector<DirichletOpinion> out;
  out.reserve(j.size());
  for (const auto& item : j) out.push_back(opinion_from_json(item));
  return out;
}

nlohmann::json fusion_outcome_to_json(const FusionOutcome& outcome) {
  json j{{"beliefs", outcome.opinion.beliefs},
         {"uncertainty", outcome.opinion.uncertainty},
         {"conflict", outcome.conflict},
         {"normalizer", outcome.normalizer},
         {"rule", to_string(outcome.rule)}};
  if (outcome.recovered_evidence.has_value()) {
    j["evidence"] = outcome.recovered_evidence->values;
  } else {
    j["evidence"] = nullptr;
  }
  return j;
}

nlohmann::json loss_breakdown_to_json(const LossBreakdown& loss) {
  return json{{"adjusted_ce", loss.adjusted_ce},
              {"kl", loss.kl},
              {"lambda", loss.lambda},
              {"total", loss.total}};
}

nlohmann::json metrics_report_to_json(const MetricsReport& report) {
  json per_class = json::array();
  for (const PerClassMetrics& pc : report.per_class) {
    per_class.push_back(json{{"support", pc.support},
                             {"precision", pc.precision},
                             {"recall", pc.recall},
                             {"f1", pc.f1}});
  }
  json j{{"accuracy", report.accuracy},
         {"macro_f1", report.macro_f1},
         {"per_class", per_class}};
  j["macro_auc"] = report.macro_auc.has_value() ? json(*report.macro_auc) : json(nullptr);
  j["mean_uncertainty_id"] =
      report.mean_uncertainty_id.has_value() ? json(*report.mean_uncertainty_id) : json(nullptr);
  j["mean_uncertainty_ood"] =
      report.mean_uncertainty_ood.has_value() ? json(*report.mean_uncertainty_ood) : json(nullptr);
  return j;
}

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec) {
  json j{{"class_count", spec.class_count},
         {"view_count", spec.view_count},
         {"feature_dims", spec.feature_dims},
         {"separation", spec.separation},
         {"sigma", spec.sigma},
         {"samples_per_class", spec.samples_per_class},
         {"conflict_fraction", spec.conflict_fraction},
         {"ood_samples", spec.ood_samples},
         {"ood_offset", spec.ood_offset},
         {"train_fraction", spec.train_fraction},
         {"val_fraction", spec.val_fraction}};
  j["conflict_view"] =
      spec.conflict_view.has_value() ? json(*spec.conflict_view) : json(nullptr);
  return j;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  require_object(j, "synthetic spec");
  SyntheticSpec spec;
  if (j.contains("class_count")) spec.class_count = j["class_count"].get<std::size_t>();
  if (j.contains("view_count")) spec.view_count = j["view_count"].get<std::size_t>();
  if (j.contains("feature_dims"))
    spec.feature_dims = j["feature_dims"].get<std::vector<std::size_t>>();
  if (j.contains("separation")) spec.separation = j["separation"].get<double>();
  if (j.contains("sigma")) spec.sigma = j["sigma"].get<double>();
  if (j.contains("samples_per_class"))
    spec.samples_per_class = j["samples_per_class"].get<std::size_t>();
  if (j.contains("conflict_fraction"))
    spec.conflict_fraction = j["conflict_fraction"].get<double>();
  if (j.contains("conflict_view") && !j["conflict_view"].is_null())
    spec.conflict_view = j["conflict_view"].get<std::size_t>();
  if (j.contains("ood_samples")) spec.ood_samples = j["ood_samples"].get<std::size_t>();
  if (j.contains("ood_offset")) spec.ood_offset = j["ood_offset"].get<double>();
  if (j.contains("train_fraction")) spec.train_fraction = j["train_fraction"].get<double>();
  if (j.contains("val_fraction")) spec.val_fraction = j["val_fraction"].get<double>();
  spec.validate();
  return spec;
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  json views = json::array();
  for (const ViewDescriptor& v : manifest.views) {
    views.push_back(json{{"csv", v.csv_path}, {"feature_dim", v.feature_dim}});
  }
  json j{{"version", manifest.version.empty() ? kLibraryVersion : manifest.version},
         {"class_count", manifest.class_count},
         {"views", views},
         {"labels_csv", manifest.labels_csv},
         {"split",
          json{{"train", manifest.split.train},
               {"val", manifest.split.val},
               {"test", manifest.split.test},
               {"ood", manifest.split.ood}}}};
  if (manifest.generator_seed.has_value()) {
    json generator{{"seed", *manifest.generator_seed}};
    if (!manifest.generator_spec_json.empty()) {
      generator["spec"] = json::parse(manifest.generator_spec_json);
    }
    j["generator"] = generator;
  }
  return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  require_object(j, "manifest");
  DatasetManifest m;
  m.version = require_field(j, "version", "manifest").get<std::string>();
  m.class_count = require_field(j, "class_count", "manifest").get<std::size_t>();
  const json& views = require_field(j, "views", "manifest");
  if (!views.is_array() || views.empty()) {
    throw validation_error("manifest.views: expected a non-empty array");
  }
  for (const auto& v : views) {
    require_object(v, "manifest view");
    ViewDescriptor d;
    d.csv_path = require_field(v, "csv", "manifest view").get<std::string>();
    d.feature_dim = require_field(v, "feature_dim", "manifest view").get<std::size_t>();
    m.views.push_back(std::move(d));
  }
  m.labels_csv = require_field(j, "labels_csv", "manifest").get<std::string>();
  const json& split = require_field(j, "split", "manifest");
  require_object(split, "manifest.split");
  m.split.train = index_array(require_field(split, "train", "manifest.split"), "split.train");
  m.split.val = index_array(require_field(split, "val", "manifest.split"), "split.val");
  m.split.test = index_array(require_field(split, "test", "manifest.split"), "split.test");
  if (split.contains("ood")) m.split.ood = index_array(split["ood"], "split.ood");
  if (j.contains("generator")) {
    const json& generator = j["generator"];
    require_object(generator, "manifest.generator");
    m.generator_seed = require_field(generator, "seed", "manifest.generator")
                           .get<std::uint64_t>();
    if (generator.contains("spec")) {
      m.generator_spec_json = generator["spec"].dump();
    }
  }
  return m;
}

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
  return json{{"learning_rate", cfg.learning_rate},
              {"max_epochs", cfg.max_epochs},
              {"batch_size", cfg.batch_size},
              {"seed", cfg.seed},
              {"hidden_dim", cfg.hidden_dim},
              {"anneal",
               json{{"lambda_max", cfg.anneal.lambda_max},
                    {"ramp_epochs", cfg.anneal.ramp_epochs}}},
              {"head", to_string(cfg.head)},
              {"decision", to_string(cfg.decision)},
              {"optimizer",
               json{{"name", "adam"},
                    {"beta1", TrainConfig::kBeta1},
                    {"beta2", TrainConfig::kBeta2},
                    {"epsilon", TrainConfig::kEpsilon},
                    {"batch_reduction", "mean"}}}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  require_object(j, "train config");
  TrainConfig cfg;
  if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("max_epochs")) cfg.max_epochs = j["max_epochs"].get<int>();
  if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("hidden_dim")) cfg.hidden_dim = j["hidden_dim"].get<std::size_t>();
  if (j.contains("anneal")) {
    const json& anneal = j["anneal"];
    require_object(anneal, "train config anneal");
    if (anneal.contains("lambda_max"))
      cfg.anneal.lambda_max = anneal["lambda_max"].get<double>();
    if (anneal.contains("ramp_epochs"))
      cfg.anneal.ramp_epochs = anneal["ramp_epochs"].get<int>();
  }
  if (j.contains("head")) cfg.head = head_kind_from_string(j["head"].get<std::string>());
  if (j.contains("decision"))
    cfg.decision = decision_rule_from_string(j["decision"].get<std::string>());
  cfg.validate();
  return cfg;
}

nlohmann::json checkpoint_to_json(const MultiViewModel& model) {
  json views = json::array();
  for (std::size_t v = 0; v < model.views.size(); ++v) {
    const ViewModel& vm = model.views[v];
    views.push_back(json{{"input_dim", vm.input_dim},
                         {"hidden_dim", vm.hidden_dim},
                         {"w1", vm.w1},
                         {"b1", vm.b1},
                         {"w2", vm.w2},
                         {"b2", vm.b2}});
  }
  json optimizer = json::array();
  for (const AdamState& s : model.optimizer) {
    optimizer.push_back(json{{"m", s.m}, {"v", s.v}, {"step", s.step}});
  }
  return json{{"version", kLibraryVersion},
              {"class_count", model.class_count},
              {"head", to_string(model.head)},
              {"decision", to_string(model.decision)},
              {"views", views},
              {"optimizer_state", optimizer},
              {"config", train_config_to_json(model.config)},
              {"rng_state", model.rng_state}};
}

MultiViewModel checkpoint_from_json(const nlohmann::json& j) {
  require_object(j, "checkpoint");
  MultiViewModel model;
  model.class_count = require_field(j, "class_count", "checkpoint").get<std::size_t>();
  model.head =
      head_kind_from_string(require_field(j, "head", "checkpoint").get<std::string>());
  model.decision = decision_rule_from_string(
      require_field(j, "decision", "checkpoint").get<std::string>());
  const json& views = require_field(j, "views", "checkpoint");
  if (!views.is_array() || views.empty()) {
    throw validation_error("checkpoint.views: expected a non-empty array");
  }
  for (const auto& v : views) {
    ViewModel vm;
    vm.input_dim = require_field(v, "input_dim", "checkpoint view").get<std::size_t>();
    vm.hidden_dim = require_field(v, "hidden_dim", "checkpoint view").get<std::size_t>();
    vm.class_count = model.class_count;
    vm.w1 = number_array(require_field(v, "w1", "checkpoint view"), "checkpoint.w1");
    vm.b1 = number_array(require_field(v, "b1", "checkpoint view"), "checkpoint.b1");
    vm.w2 = number_array(require_field(v, "w2", "checkpoint view"), "checkpoint.w2");
    vm.b2 = number_array(require_field(v, "b2", "checkpoint view"), "checkpoint.b2");
    model.views.push_back(std::move(vm));
  }
  const json& optimizer = require_field(j, "optimizer_state", "checkpoint");
  if (!optimizer.is_array() || optimizer.size() != model.views.size()) {
    throw validation_error("checkpoint.optimizer_state: one entry per view required");
  }
  for (const auto& s : optimizer) {
    AdamState state;
    state.m = number_array(require_field(s, "m", "checkpoint optimizer"), "optimizer.m");
    state.v = number_array(require_field(s, "v", "checkpoint optimizer"), "optimizer.v");
    state.step = require_field(s, "step", "checkpoint optimizer").get<std::int64_t>();
    model.optimizer.push_back(std::move(state));
  }
  model.config = train_config_from_json(require_field(j, "config", "checkpoint"));
  model.rng_state = require_field(j, "rng_state", "checkpoint").get<std::string>();
  model.validate();
  return model;
}

void save_checkpoint(const MultiViewModel& model,
                     const std::filesystem::path& path) {
  write_json_file(path, checkpoint_to_json(model));
}

MultiViewModel load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(load_json_file(path));
}

std::string config_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << hash;
  return os.str();
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("cannot open file: " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw validation_error("malformed JSON in " + path.string() + ": " + err.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw validation_error("cannot write file: " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("short write to " + path.string());
  }
}

}  // namespace evident
