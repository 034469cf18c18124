#include "evident/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evident/batch.hpp"
#include "evident/errors.hpp"
#include "evident/log.hpp"
#include "evident/metrics.hpp"
#include "evident/serialize.hpp"
#include "evident/version.hpp"

namespace evident {

namespace {

using nlohmann::json;

json run_stamp(std::uint64_t seed, const json& config) {
  return json{{"library_version", kLibraryVersion},
              {"seed", seed},
              {"config_hash", config_hash(config)},
              {"config", config}};
}

}  // namespace

ZadehDemo run_conflict_demo() {
  ZadehDemo demo;
  demo.expert_one = DirichletOpinion{{0.99, 0.0, 0.01}, 0.0};
  demo.expert_two = DirichletOpinion{{0.0, 0.99, 0.01}, 0.0};
  demo.ds = ds_combine_pair(demo.expert_one, demo.expert_two);
  demo.ider = ider_combine_pair(demo.expert_one, demo.expert_two);
  return demo;
}

nlohmann::json zadeh_demo_to_json(const ZadehDemo& demo) {
  return json{{"library_version", kLibraryVersion},
              {"inputs", json::array({opinion_to_json(demo.expert_one),
                                      opinion_to_json(demo.expert_two)})},
              {"ds", fusion_outcome_to_json(demo.ds)},
              {"ider", fusion_outcome_to_json(demo.ider)},
              {"conflict", demo.ds.conflict}};
}

std::string zadeh_demo_table(const ZadehDemo& demo) {
  std::ostringstream out;
  out << "Two certain experts, three classes: each almost rules out class 3\n"
      << "and fully backs a different class.\n\n";
  char line[128];
  std::snprintf(line, sizeof(line), "  %-12s %10s %10s %10s %10s\n", "component",
                "expert 1", "expert 2", "ds", "ider");
  out << line;
  for (std::size_t k = 0; k < demo.expert_one.class_count(); ++k) {
    std::snprintf(line, sizeof(line), "  belief[%zu]    %10.6f %10.6f %10.6f %10.6f\n",
                  k, demo.expert_one.beliefs[k], demo.expert_two.beliefs[k],
                  demo.ds.opinion.beliefs[k], demo.ider.opinion.beliefs[k]);
    out << line;
  }
  std::snprintf(line, sizeof(line), "  %-12s %10.6f %10.6f %10.6f %10.6f\n",
                "uncertainty", demo.expert_one.uncertainty,
                demo.expert_two.uncertainty, demo.ds.opinion.uncertainty,
                demo.ider.opinion.uncertainty);
  out << line;
  std::snprintf(line, sizeof(line), "\n  conflict mass C = %.6f\n", demo.ds.conflict);
  out << line;
  out << "  ds assigns the doubly-rejected class belief "
      << demo.ds.opinion.beliefs[2] << "; ider keeps it at "
      << demo.ider.opinion.beliefs[2] << ".\n";
  return out.str();
}

Histogram histogram_unit_interval(std::span<const double> values,
                                  std::size_t bins) {
  if (bins == 0) throw validation_error("histogram: need at least one bin");
  Histogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.bin_edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < 0.0 || v > 1.0) {
      throw validation_error("histogram: value " + std::to_string(v) +
                             " outside [0, 1]");
    }
    std::size_t bin = static_cast<std::size_t>(v * static_cast<double>(bins));
    if (bin == bins) bin = bins - 1;  // v == 1.0 lands in the last bin
    ++h.counts[bin];
  }
  return h;
}

OodReport run_ood_experiment(const MultiViewModel& evidential,
                             const MultiViewModel& softmax_baseline,
                             const LoadedDataset& data,
                             std::size_t histogram_bins) {
  if (data.manifest.split.ood.empty()) {
    throw validation_error("run_ood_experiment: manifest has no OOD rows");
  }
  if (data.manifest.split.test.empty()) {
    throw validation_error("run_ood_experiment: manifest has no test rows");
  }
  if (evidential.head != HeadKind::kEvidential) {
    throw validation_error("run_ood_experiment: first model must be evidential");
  }
  if (softmax_baseline.head != HeadKind::kSoftmax) {
    throw validation_error("run_ood_experiment: baseline model must be softmax");
  }

  const auto& id_rows = data.manifest.split.test;
  const auto& ood_rows = data.manifest.split.ood;

  const std::vector<Prediction> id_preds =
      predict_rows_parallel(evidential, data, id_rows);
  const std::vector<Prediction> ood_preds =
      predict_rows_parallel(evidential, data, ood_rows);
  const std::vector<Prediction> softmax_ood =
      predict_rows_parallel(softmax_baseline, data, ood_rows);

  std::vector<double> u_id(id_preds.size());
  for (std::size_t i = 0; i < id_preds.size(); ++i) {
    u_id[i] = id_preds[i].fusion->opinion.uncertainty;
  }
  std::vector<double> u_ood(ood_preds.size());
  for (std::size_t i = 0; i < ood_preds.size(); ++i) {
    u_ood[i] = ood_preds[i].fusion->opinion.uncertainty;
  }
  std::vector<double> maxprob_ood(softmax_ood.size());
  for (std::size_t i = 0; i < softmax_ood.size(); ++i) {
    const auto& p = softmax_ood[i].probs.probs;
    maxprob_ood[i] = *std::max_element(p.begin(), p.end());
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  OodReport report;
  report.mean_uncertainty_id = mean(u_id);
  report.mean_uncertainty_ood = mean(u_ood);
  report.uncertainty_ratio = report.mean_uncertainty_ood / report.mean_uncertainty_id;
  report.softmax_mean_maxprob_ood = mean(maxprob_ood);
  report.uncertainty_id = histogram_unit_interval(u_id, histogram_bins);
  report.uncertainty_ood = histogram_unit_interval(u_ood, histogram_bins);
  report.softmax_maxprob_ood = histogram_unit_interval(maxprob_ood, histogram_bins);
  return report;
}

nlohmann::json ood_report_to_json(const OodReport& report) {
  auto hist = [](const Histogram& h) {
    return json{{"bin_edges", h.bin_edges}, {"counts", h.counts}};
  };
  return json{{"mean_uncertainty_id", report.mean_uncertainty_id},
              {"mean_uncertainty_ood", report.mean_uncertainty_ood},
              {"uncertainty_ratio", report.uncertainty_ratio},
              {"softmax_mean_maxprob_ood", report.softmax_mean_maxprob_ood},
              {"histograms",
               json{{"fused_uncertainty_id", hist(report.uncertainty_id)},
                    {"fused_uncertainty_ood", hist(report.uncertainty_ood)},
                    {"softmax_maxprob_ood", hist(report.softmax_maxprob_ood)}}}};
}

std::string ood_histograms_csv(const OodReport& report) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,fused_uncertainty_id,fused_uncertainty_ood,softmax_maxprob_ood\n";
  const std::size_t bins = report.uncertainty_id.counts.size();
  for (std::size_t i = 0; i < bins; ++i) {
    out << report.uncertainty_id.bin_edges[i] << ','
        << report.uncertainty_id.bin_edges[i + 1] << ','
        << report.uncertainty_id.counts[i] << ','
        << report.uncertainty_ood.counts[i] << ','
        << report.softmax_maxprob_ood.counts[i] << '\n';
  }
  return out.str();
}

OodReport run_ood_pipeline(std::uint64_t seed,
                           const std::filesystem::path& out_dir) {
  const SyntheticSpec spec = SyntheticSpec::standard();
  generate_synthetic(spec, seed, out_dir / "data");
  const LoadedDataset data = load_dataset(out_dir / "data" / "manifest.json");

  TrainConfig evidential_cfg;
  evidential_cfg.seed = seed;
  TrainConfig softmax_cfg = evidential_cfg;
  softmax_cfg.head = HeadKind::kSoftmax;
  softmax_cfg.decision = DecisionRule::kScoreAverage;

  EVIDENT_LOG_INFO("ood experiment: training evidential model (seed %llu)",
                   static_cast<unsigned long long>(seed));
  const TrainResult evidential = train(data, evidential_cfg);
  EVIDENT_LOG_INFO("ood experiment: training softmax baseline");
  const TrainResult softmax_model = train(data, softmax_cfg);

  const OodReport report =
      run_ood_experiment(evidential.model, softmax_model.model, data);

  json config{{"synthetic_spec", synthetic_spec_to_json(spec)},
              {"evidential", train_config_to_json(evidential_cfg)},
              {"softmax_baseline", train_config_to_json(softmax_cfg)}};
  json doc = ood_report_to_json(report);
  doc["run"] = run_stamp(seed, config);
  write_json_file(out_dir / "report.json", doc);
  write_text_file(out_dir / "histograms.csv", ood_histograms_csv(report));
  return report;
}

RobustnessReport run_robustness_experiment(const RobustnessConfig& cfg) {
  if (cfg.runs == 0) {
    throw validation_error("run_robustness_experiment: need at least one run");
  }
  if (cfg.work_dir.empty()) {
    throw validation_error("run_robustness_experiment: work_dir required");
  }
  const SyntheticSpec spec = SyntheticSpec::standard();
  if (cfg.corrupted_view >= spec.view_count) {
    throw validation_error("run_robustness_experiment: corrupted view out of range");
  }

  RobustnessReport report;
  report.corrupted_view = cfg.corrupted_view;
  report.noise_multiplier = cfg.noise_multiplier;

  for (std::size_t run = 0; run < cfg.runs; ++run) {
    const std::uint64_t seed = cfg.base_seed + run;
    report.seeds.push_back(seed);
    const std::filesystem::path seed_dir =
        cfg.work_dir / ("seed_" + std::to_string(seed));

    generate_synthetic(spec, seed, seed_dir / "data");
    const LoadedDataset clean = load_dataset(seed_dir / "data" / "manifest.json");

    const double sigma_data =
        view_feature_stddev(clean, cfg.corrupted_view, clean.manifest.split.train);
    const double noise_sigma = cfg.noise_multiplier * sigma_data;
    corrupt_view(clean, cfg.corrupted_view, noise_sigma, seed ^ 0x9e3779b97f4a7c15ull,
                 seed_dir / "corrupted");
    const LoadedDataset corrupted =
        load_dataset(seed_dir / "corrupted" / "manifest.json");

    TrainConfig softmax_cfg;
    softmax_cfg.seed = seed;
    softmax_cfg.head = HeadKind::kSoftmax;
    softmax_cfg.decision = DecisionRule::kScoreAverage;
    TrainConfig evidential_cfg;
    evidential_cfg.seed = seed;

    EVIDENT_LOG_INFO("robustness: seed %llu, training softmax + evidential",
                     static_cast<unsigned long long>(seed));
    const TrainResult softmax_model = train(clean, softmax_cfg);
    const TrainResult evidential = train(clean, evidential_cfg);

    MultiViewModel with_ds = evidential.model;
    with_ds.decision = DecisionRule::kDs;
    MultiViewModel with_ider = evidential.model;
    with_ider.decision = DecisionRule::kIder;

    RobustnessSeedResult seed_result;
    seed_result.seed = seed;
    seed_result.noise_sigma = noise_sigma;
    auto eval_arm = [&](const MultiViewModel& model, const std::string& name) {
      RobustnessArmResult arm;
      arm.pipeline = name;
      arm.clean_accuracy =
          evaluate(model, clean, clean.manifest.split.test).accuracy;
      arm.corrupted_accuracy =
          evaluate(model, corrupted, corrupted.manifest.split.test).accuracy;
      seed_result.arms.push_back(arm);
    };
    eval_arm(softmax_model.model, "softmax+score-average");
    eval_arm(with_ds, "evidential+ds");
    eval_arm(with_ider, "evidential+ider");
    report.per_seed.push_back(std::move(seed_result));
  }

  // Fixed-order means across seeds.
  const std::size_t arm_count = report.per_seed.front().arms.size();
  for (std::size_t a = 0; a < arm_count; ++a) {
    RobustnessArmResult mean_arm;
    mean_arm.pipeline = report.per_seed.front().arms[a].pipeline;
    for (const RobustnessSeedResult& seed_result : report.per_seed) {
      mean_arm.clean_accuracy += seed_result.arms[a].clean_accuracy;
      mean_arm.corrupted_accuracy += seed_result.arms[a].corrupted_accuracy;
    }
    mean_arm.clean_accuracy /= static_cast<double>(report.per_seed.size());
    mean_arm.corrupted_accuracy /= static_cast<double>(report.per_seed.size());
    report.mean_arms.push_back(mean_arm);
  }

  json config{{"synthetic_spec", synthetic_spec_to_json(spec)},
              {"runs", cfg.runs},
              {"corrupted_view", cfg.corrupted_view},
              {"noise_multiplier", cfg.noise_multiplier}};
  json doc = robustness_report_to_json(report);
  doc["run"] = run_stamp(cfg.base_seed, config);
  write_json_file(cfg.work_dir / "report.json", doc);
  return report;
}

nlohmann::json robustness_report_to_json(const RobustnessReport& report) {
  auto arm_json = [](const RobustnessArmResult& arm) {
    return json{{"pipeline", arm.pipeline},
                {"clean_accuracy", arm.clean_accuracy},
                {"corrupted_accuracy", arm.corrupted_accuracy},
                {"accuracy_drop", arm.drop()}};
  };
  json per_seed = json::array();
  for (const RobustnessSeedResult& s : report.per_seed) {
    json arms = json::array();
    for (const auto& arm : s.arms) arms.push_back(arm_json(arm));
    per_seed.push_back(
        json{{"seed", s.seed}, {"noise_sigma", s.noise_sigma}, {"arms", arms}});
  }
  json mean_arms = json::array();
  for (const auto& arm : report.mean_arms) mean_arms.push_back(arm_json(arm));
  return json{{"seeds", report.seeds},
              {"corrupted_view", report.corrupted_view},
              {"noise_multiplier", report.noise_multiplier},
              {"per_seed", per_seed},
              {"mean", mean_arms}};
}

std::string robustness_report_table(const RobustnessReport& report) {
  std::ostringstream out;
  out << "Accuracy under one corrupted view (noise = " << report.noise_multiplier
      << " x feature stddev on view " << report.corrupted_view << ")\n\n";
  char line[160];
  std::snprintf(line, sizeof(line), "  %-24s %12s %12s %12s\n", "pipeline (mean)",
                "clean", "corrupted", "drop");
  out << line;
  for (const auto& arm : report.mean_arms) {
    std::snprintf(line, sizeof(line), "  %-24s %12.4f %12.4f %12.4f\n",
                  arm.pipeline.c_str(), arm.clean_accuracy, arm.corrupted_accuracy,
                  arm.drop());
    out << line;
  }
  for (const auto& seed_result : report.per_seed) {
    std::snprintf(line, sizeof(line), "\n  seed %llu (noise sigma %.4f)\n",
                  static_cast<unsigned long long>(seed_result.seed),
                  seed_result.noise_sigma);
    out << line;
    for (const auto& arm : seed_result.arms) {
      std::snprintf(line, sizeof(line), "    %-24s %10.4f -> %10.4f (drop %.4f)\n",
                    arm.pipeline.c_str(), arm.clean_accuracy,
                    arm.corrupted_accuracy, arm.drop());
      out << line;
    }
  }
  return out.str();
}

}  // namespace evident
