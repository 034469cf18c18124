// Command-line front end: dataset generation, training, evaluation,
// one-shot opinion fusion and the three reference experiments.
//
// Exit codes: 0 success, 1 invalid input (bad flags, malformed or
// missing files, contract violations), 2 runtime failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "evident/batch.hpp"
#include "evident/classifier.hpp"
#include "evident/dataset.hpp"
#include "evident/errors.hpp"
#include "evident/experiments.hpp"
#include "evident/fusion.hpp"
#include "evident/log.hpp"
#include "evident/metrics.hpp"
#include "evident/serialize.hpp"
#include "evident/version.hpp"

namespace {

using nlohmann::json;

void emit(const json& j, const std::optional<std::string>& out_path) {
  if (out_path.has_value()) {
    evident::write_json_file(*out_path, j);
  }
  std::cout << j.dump(2) << "\n";
}

struct GenDataArgs {
  std::string spec_path;
  std::string out_dir;
  std::uint64_t seed = 0;
};

int cmd_gen_data(const GenDataArgs& args) {
  evident::SyntheticSpec spec = args.spec_path.empty()
                                    ? evident::SyntheticSpec::standard()
                                    : evident::synthetic_spec_from_json(
                                          evident::load_json_file(args.spec_path));
  const evident::DatasetManifest manifest =
      evident::generate_synthetic(spec, args.seed, args.out_dir);
  const std::size_t rows = manifest.split.train.size() + manifest.split.val.size() +
                           manifest.split.test.size() + manifest.split.ood.size();
  emit(json{{"manifest", (std::filesystem::path(args.out_dir) / "manifest.json").string()},
            {"rows", rows},
            {"views", manifest.views.size()},
            {"class_count", manifest.class_count},
            {"seed", args.seed},
            {"library_version", evident::kLibraryVersion}},
       std::nullopt);
  return 0;
}

struct TrainArgs {
  std::string manifest_path;
  std::string checkpoint_path;
  std::string log_path;
  evident::TrainConfig cfg;
  std::string head = "evidential";
  std::string decision = "ider";
};

int cmd_train(TrainArgs& args) {
  args.cfg.head = evident::head_kind_from_string(args.head);
  args.cfg.decision = evident::decision_rule_from_string(args.decision);
  const evident::LoadedDataset data = evident::load_dataset(args.manifest_path);
  const evident::TrainResult result = evident::train(data, args.cfg);
  evident::save_checkpoint(result.model, args.checkpoint_path);

  if (!args.log_path.empty()) {
    std::string lines;
    for (const evident::EpochLog& entry : result.log) {
      json record{{"epoch", entry.epoch},
                  {"mean_loss", evident::loss_breakdown_to_json(entry.mean_loss)}};
      record["val_accuracy"] = entry.val_accuracy.has_value()
                                   ? json(*entry.val_accuracy)
                                   : json(nullptr);
      lines += record.dump() + "\n";
    }
    evident::write_text_file(args.log_path, lines);
  }

  json summary{{"checkpoint", args.checkpoint_path},
               {"epochs", result.log.size()},
               {"final_mean_loss", result.log.back().mean_loss.total},
               {"seed", args.cfg.seed},
               {"config_hash", evident::config_hash(evident::train_config_to_json(args.cfg))},
               {"library_version", evident::kLibraryVersion}};
  summary["final_val_accuracy"] = result.log.back().val_accuracy.has_value()
                                      ? json(*result.log.back().val_accuracy)
                                      : json(nullptr);
  emit(summary, std::nullopt);
  return 0;
}

struct EvaluateArgs {
  std::string checkpoint_path;
  std::string manifest_path;
  std::string split = "test";
  std::string out_path;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const evident::MultiViewModel model = evident::load_checkpoint(args.checkpoint_path);
  const evident::LoadedDataset data = evident::load_dataset(args.manifest_path);
  const evident::SplitIndices& split = data.manifest.split;
  const std::vector<std::size_t>* rows = nullptr;
  if (args.split == "train") {
    rows = &split.train;
  } else if (args.split == "val") {
    rows = &split.val;
  } else if (args.split == "test") {
    rows = &split.test;
  } else {
    throw evident::validation_error("evaluate: unknown split '" + args.split +
                                    "' (expected train|val|test)");
  }
  const evident::MetricsReport report = evident::evaluate(model, data, *rows);
  json doc = evident::metrics_report_to_json(report);
  doc["split"] = args.split;
  doc["seed"] = model.config.seed;
  doc["config_hash"] =
      evident::config_hash(evident::train_config_to_json(model.config));
  doc["library_version"] = evident::kLibraryVersion;
  emit(doc, args.out_path.empty() ? std::nullopt
                                  : std::optional<std::string>(args.out_path));
  return 0;
}

struct FuseArgs {
  std::string in_path;
  std::string rule = "ider";
  std::string out_path;
};

int cmd_fuse(const FuseArgs& args) {
  const std::vector<evident::DirichletOpinion> opinions =
      evident::opinions_from_json(evident::load_json_file(args.in_path));
  const evident::FusionOutcome outcome =
      evident::combine_all(opinions, evident::fusion_rule_from_string(args.rule));
  emit(evident::fusion_outcome_to_json(outcome),
       args.out_path.empty() ? std::nullopt
                             : std::optional<std::string>(args.out_path));
  return 0;
}

struct ZadehArgs {
  std::string json_path;
};

int cmd_demo_zadeh(const ZadehArgs& args) {
  const evident::ZadehDemo demo = evident::run_conflict_demo();
  std::cout << evident::zadeh_demo_table(demo);
  if (!args.json_path.empty()) {
    evident::write_json_file(args.json_path, evident::zadeh_demo_to_json(demo));
  }
  return 0;
}

struct OodArgs {
  std::uint64_t seed = 0;
  std::string out_dir;
};

int cmd_exp_ood(const OodArgs& args) {
  std::filesystem::create_directories(args.out_dir);
  const evident::OodReport report = evident::run_ood_pipeline(args.seed, args.out_dir);
  emit(json{{"mean_uncertainty_id", report.mean_uncertainty_id},
            {"mean_uncertainty_ood", report.mean_uncertainty_ood},
            {"uncertainty_ratio", report.uncertainty_ratio},
            {"softmax_mean_maxprob_ood", report.softmax_mean_maxprob_ood},
            {"report", (std::filesystem::path(args.out_dir) / "report.json").string()}},
       std::nullopt);
  return 0;
}

struct RobustnessArgs {
  std::uint64_t seed = 0;
  std::size_t runs = 3;
  std::size_t view = 1;
  double noise_mult = 5.0;
  std::string out_dir;
};

int cmd_exp_robustness(const RobustnessArgs& args) {
  evident::RobustnessConfig cfg;
  cfg.base_seed = args.seed;
  cfg.runs = args.runs;
  cfg.corrupted_view = args.view;
  cfg.noise_multiplier = args.noise_mult;
  cfg.work_dir = args.out_dir;
  std::filesystem::create_directories(cfg.work_dir);
  const evident::RobustnessReport report = evident::run_robustness_experiment(cfg);
  std::cout << evident::robustness_report_table(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet opinions, impartial multi-view fusion, and the "
               "evidential training loop, with desk-scale experiments"};
  app.set_version_flag("--version", evident::kLibraryVersion);
  app.require_subcommand(1);

  GenDataArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen-data", "Generate a synthetic multi-view dataset from a spec");
  gen->add_option("--spec", gen_args.spec_path,
                  "Synthetic spec JSON (omit for the standard workload)");
  gen->add_option("--out", gen_args.out_dir, "Output directory")->required();
  gen->add_option("--seed", gen_args.seed, "Generator seed")->required();
  gen->callback([&] { cmd_gen_data(gen_args); });

  TrainArgs train_args;
  CLI::App* train_cmd =
      app.add_subcommand("train", "Train a multi-view model on a dataset");
  train_cmd->add_option("--manifest", train_args.manifest_path, "Dataset manifest")
      ->required();
  train_cmd->add_option("--out", train_args.checkpoint_path, "Checkpoint path")
      ->required();
  train_cmd->add_option("--log", train_args.log_path, "Training log (JSON lines)");
  train_cmd->add_option("--seed", train_args.cfg.seed, "Training seed")->required();
  train_cmd->add_option("--epochs", train_args.cfg.max_epochs, "Max epochs");
  train_cmd->add_option("--lr", train_args.cfg.learning_rate, "Learning rate");
  train_cmd->add_option("--batch-size", train_args.cfg.batch_size, "Batch size");
  train_cmd->add_option("--hidden", train_args.cfg.hidden_dim, "Hidden width");
  train_cmd->add_option("--lambda-max", train_args.cfg.anneal.lambda_max,
                        "Regularizer weight cap");
  train_cmd->add_option("--ramp-epochs", train_args.cfg.anneal.ramp_epochs,
                        "Epochs to reach the cap");
  train_cmd->add_option("--head", train_args.head, "evidential|softmax");
  train_cmd->add_option("--decision", train_args.decision,
                        "ider|ds|score-average");
  train_cmd->callback([&] { cmd_train(train_args); });

  EvaluateArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "Evaluate a checkpoint on a dataset split");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint_path, "Checkpoint path")
      ->required();
  eval_cmd->add_option("--manifest", eval_args.manifest_path, "Dataset manifest")
      ->required();
  eval_cmd->add_option("--split", eval_args.split, "train|val|test");
  eval_cmd->add_option("--out", eval_args.out_path, "Also write the report here");
  eval_cmd->callback([&] { cmd_evaluate(eval_args); });

  FuseArgs fuse_args;
  CLI::App* fuse_cmd = app.add_subcommand(
      "fuse", "Combine a JSON array of opinions into one fused outcome");
  fuse_cmd->add_option("--in", fuse_args.in_path, "Opinions JSON file")->required();
  fuse_cmd->add_option("--rule", fuse_args.rule, "ider|ds")->required();
  fuse_cmd->add_option("--out", fuse_args.out_path, "Also write the outcome here");
  fuse_cmd->callback([&] { cmd_fuse(fuse_args); });

  ZadehArgs zadeh_args;
  CLI::App* zadeh_cmd = app.add_subcommand(
      "demo-zadeh", "Show the two-expert total-conflict scenario under both rules");
  zadeh_cmd->add_option("--json", zadeh_args.json_path,
                        "Write the machine-readable report here");
  zadeh_cmd->callback([&] { cmd_demo_zadeh(zadeh_args); });

  OodArgs ood_args;
  CLI::App* ood_cmd = app.add_subcommand(
      "exp-ood", "Uncertainty on out-of-distribution data vs the softmax baseline");
  ood_cmd->add_option("--seed", ood_args.seed, "Experiment seed")->required();
  ood_cmd->add_option("--out", ood_args.out_dir, "Output directory")->required();
  ood_cmd->callback([&] { cmd_exp_ood(ood_args); });

  RobustnessArgs robust_args;
  CLI::App* robust_cmd = app.add_subcommand(
      "exp-robustness", "Accuracy drop under a corrupted view, per fusion pipeline");
  robust_cmd->add_option("--seed", robust_args.seed, "Base seed")->required();
  robust_cmd->add_option("--runs", robust_args.runs, "Number of seeds");
  robust_cmd->add_option("--view", robust_args.view, "View to corrupt");
  robust_cmd->add_option("--noise-mult", robust_args.noise_mult,
                         "Noise stddev as a multiple of the view's feature stddev");
  robust_cmd->add_option("--out", robust_args.out_dir, "Output directory")->required();
  robust_cmd->callback([&] { cmd_exp_robustness(robust_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const evident::validation_error& e) {
    EVIDENT_LOG_ERROR("%s", e.what());
    return 1;
  } catch (const std::exception& e) {
    EVIDENT_LOG_ERROR("%s", e.what());
    return 2;
  }
  return 0;
}
