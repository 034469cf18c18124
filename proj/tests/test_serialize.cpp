#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "evident/classifier.hpp"
#include "evident/errors.hpp"
#include "evident/experiments.hpp"
#include "evident/fusion.hpp"
#include "evident/serialize.hpp"

using namespace evident;
using nlohmann::json;

TEST_CASE("opinion wire format") {
  const DirichletOpinion o{{0.25, 0.5}, 0.25};
  const json j = opinion_to_json(o);
  const DirichletOpinion back = opinion_from_json(j);
  CHECK(back.beliefs == o.beliefs);
  CHECK(back.uncertainty == o.uncertainty);

  // field order does not matter
  const DirichletOpinion reordered =
      opinion_from_json(json::parse(R"({"uncertainty":0.25,"beliefs":[0.25,0.5]})"));
  CHECK(reordered.beliefs == o.beliefs);

  // unknown fields are rejected
  CHECK_THROWS_WITH_AS(
      opinion_from_json(json::parse(
          R"({"beliefs":[0.25,0.5],"uncertainty":0.25,"extra":1})")),
      doctest::Contains("unknown field"), validation_error);
  // malformed payloads
  CHECK_THROWS_AS(opinion_from_json(json::parse(R"({"beliefs":[0.25,0.5]})")),
                  validation_error);
  CHECK_THROWS_AS(opinion_from_json(json::parse(R"({"beliefs":[0.9,0.5],"uncertainty":0.25})")),
                  validation_error);
  CHECK_THROWS_AS(opinion_from_json(json::parse("[1,2]")), validation_error);
}

TEST_CASE("evidence wire format") {
  const Evidence e{{1.5, 0.0, 3.25}};
  const Evidence back = evidence_from_json(evidence_to_json(e));
  CHECK(back.values == e.values);
  CHECK_THROWS_WITH_AS(
      evidence_from_json(json::parse(R"({"evidence":[1.0],"note":"x"})")),
      doctest::Contains("unknown field"), validation_error);
}

TEST_CASE("fusion outcome serialization") {
  const DirichletOpinion a{{0.6, 0.2}, 0.2};
  const DirichletOpinion b{{0.1, 0.7}, 0.2};
  const json j = fusion_outcome_to_json(ider_combine_pair(a, b));
  CHECK(j["rule"] == "ider");
  CHECK(j.contains("beliefs"));
  CHECK(j.contains("uncertainty"));
  CHECK(j.contains("conflict"));
  CHECK(j.contains("normalizer"));
  CHECK(j["evidence"].is_array());  // uncertainty > 0: evidence recoverable

  // fully certain outcome: evidence is explicitly null
  const json certain = fusion_outcome_to_json(
      ds_combine_pair({{0.99, 0.0, 0.01}, 0.0}, {{0.0, 0.99, 0.01}, 0.0}));
  CHECK(certain["evidence"].is_null());
  CHECK(certain["rule"] == "ds");
}

TEST_CASE("opinions array parsing") {
  const json arr = json::parse(
      R"([{"beliefs":[0.5,0.25],"uncertainty":0.25},
          {"beliefs":[0.0,0.0],"uncertainty":1.0}])");
  const auto opinions = opinions_from_json(arr);
  REQUIRE(opinions.size() == 2);
  CHECK(opinions[1].uncertainty == 1.0);
  CHECK_THROWS_AS(opinions_from_json(json::parse(R"({"beliefs":[1.0,0.0]})")),
                  validation_error);
}

TEST_CASE("synthetic spec round trip") {
  SyntheticSpec spec = SyntheticSpec::standard();
  spec.conflict_view = 2;
  const SyntheticSpec back = synthetic_spec_from_json(synthetic_spec_to_json(spec));
  CHECK(back.class_count == spec.class_count);
  CHECK(back.feature_dims == spec.feature_dims);
  CHECK(back.conflict_view == spec.conflict_view);
  CHECK(back.ood_offset == spec.ood_offset);

  spec.conflict_view.reset();
  const SyntheticSpec back2 = synthetic_spec_from_json(synthetic_spec_to_json(spec));
  CHECK_FALSE(back2.conflict_view.has_value());
  // defaults fill missing fields
  const SyntheticSpec defaults = synthetic_spec_from_json(json::object());
  CHECK(defaults.class_count == 4);
}

TEST_CASE("manifest round trip") {
  DatasetManifest m;
  m.version = "0.1.0";
  m.class_count = 3;
  m.views = {{"view_0.csv", 8}, {"view_1.csv", 6}};
  m.labels_csv = "labels.csv";
  m.split.train = {0, 1, 2};
  m.split.val = {3};
  m.split.test = {4, 5};
  m.split.ood = {6};
  m.generator_seed = 42;
  m.generator_spec_json = synthetic_spec_to_json(SyntheticSpec::standard()).dump();
  const DatasetManifest back = manifest_from_json(manifest_to_json(m));
  CHECK(back.class_count == 3);
  CHECK(back.views.size() == 2);
  CHECK(back.views[1].feature_dim == 6);
  CHECK(back.split.train == m.split.train);
  CHECK(back.split.ood == m.split.ood);
  CHECK(back.generator_seed == m.generator_seed);
  CHECK_THROWS_AS(manifest_from_json(json::object()), validation_error);
}

TEST_CASE("train config round trip") {
  TrainConfig cfg;
  cfg.seed = 7;
  cfg.learning_rate = 0.01;
  cfg.head = HeadKind::kSoftmax;
  cfg.decision = DecisionRule::kScoreAverage;
  cfg.anneal.lambda_max = 0.5;
  const TrainConfig back = train_config_from_json(train_config_to_json(cfg));
  CHECK(back.seed == 7);
  CHECK(back.learning_rate == 0.01);
  CHECK(back.head == HeadKind::kSoftmax);
  CHECK(back.decision == DecisionRule::kScoreAverage);
  CHECK(back.anneal.lambda_max == 0.5);
  // the serialized form records the fixed optimizer constants
  const json j = train_config_to_json(cfg);
  CHECK(j["optimizer"]["name"] == "adam");
  CHECK(j["optimizer"]["beta1"] == 0.9);
  CHECK(j["optimizer"]["batch_reduction"] == "mean");
}

TEST_CASE("config hash is stable and sensitive") {
  const json a = train_config_to_json(TrainConfig{});
  TrainConfig other;
  other.seed = 1;
  const json b = train_config_to_json(other);
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("metrics report serialization handles undefined fields") {
  MetricsReport report;
  report.accuracy = 0.75;
  report.macro_f1 = 0.5;
  report.per_class = {{10, 1.0, 0.5, 2.0 / 3.0}};
  const json j = metrics_report_to_json(report);
  CHECK(j["macro_auc"].is_null());
  CHECK(j["mean_uncertainty_id"].is_null());
  CHECK(j["mean_uncertainty_ood"].is_null());
  CHECK(j["per_class"][0]["support"] == 10);

  report.macro_auc = 0.9;
  report.mean_uncertainty_id = 0.2;
  const json j2 = metrics_report_to_json(report);
  CHECK(j2["macro_auc"] == 0.9);
  CHECK(j2["mean_uncertainty_id"] == 0.2);
}

TEST_CASE("zadeh demo serialization carries both rules") {
  const json j = zadeh_demo_to_json(run_conflict_demo());
  CHECK(j["inputs"].size() == 2);
  CHECK(j["ds"]["rule"] == "ds");
  CHECK(j["ider"]["rule"] == "ider");
  CHECK(j["conflict"].get<double>() == doctest::Approx(0.9999).epsilon(1e-12));
}

TEST_CASE("json file helpers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "evident_serialize_files";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_json_file(dir / "x.json", json{{"a", 1}});
  CHECK(load_json_file(dir / "x.json")["a"] == 1);
  CHECK_THROWS_WITH_AS(load_json_file(dir / "missing.json"),
                       doctest::Contains("missing.json"), validation_error);
  write_text_file(dir / "bad.json", "{not json");
  CHECK_THROWS_WITH_AS(load_json_file(dir / "bad.json"),
                       doctest::Contains("malformed"), validation_error);
}
