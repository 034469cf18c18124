#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "evident/classifier.hpp"
#include "evident/dataset.hpp"
#include "evident/fusion.hpp"
#include "evident/loss.hpp"
#include "evident/metrics.hpp"
#include "evident/opinion.hpp"

namespace evident {

// Opinions and evidence are wire formats: field order is irrelevant and
// unknown fields are rejected.
nlohmann::json opinion_to_json(const DirichletOpinion& o);
DirichletOpinion opinion_from_json(const nlohmann::json& j);
nlohmann::json evidence_to_json(const Evidence& e);
Evidence evidence_from_json(const nlohmann::json& j);
std::vector<DirichletOpinion> opinions_from_json(const nlohmann::json& j);

// {beliefs, uncertainty, evidence (nullable), conflict, normalizer, rule}
nlohmann::json fusion_outcome_to_json(const FusionOutcome& outcome);

nlohmann::json loss_breakdown_to_json(const LossBreakdown& loss);
nlohmann::json metrics_report_to_json(const MetricsReport& report);

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

// Checkpoint: one JSON document holding the model, optimizer state,
// config and RNG state, so training is resumable and runs are auditable.
nlohmann::json checkpoint_to_json(const MultiViewModel& model);
MultiViewModel checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const MultiViewModel& model,
                     const std::filesystem::path& path);
MultiViewModel load_checkpoint(const std::filesystem::path& path);

// FNV-1a over the canonical dump; reports embed it so any number can be
// traced back to the exact configuration that produced it.
std::string config_hash(const nlohmann::json& j);

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace evident
