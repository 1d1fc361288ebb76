#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cli/run_config.hpp"
#include "cphmm/dataset.hpp"
#include "cphmm/hmm.hpp"

namespace cphmm::cli {

enum class ExperimentMode { A, B };

/// Writes the synthetic dataset described by `spec_file` (JSON) into
/// `out_dir`, echoing the spec into the manifest.
RawDataset cmd_generate(const std::filesystem::path& spec_file, const std::filesystem::path& out_dir,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

/// Writes cp_by_gesture.csv, cp_by_sensor.csv and cp_medians.csv into
/// config.output_dir.
void cmd_stats(const RunConfig& config, std::ostream& log);

/// Full pipeline. Writes records.csv, sweeps.csv, cp_medians.csv and
/// codebooks/c<c>.txt, plus xi_by_variant.csv, xi_by_gesture.csv and
/// xi_by_sensor.csv (mode A) or xi_by_cluster.csv (mode B).
void cmd_experiment(const RunConfig& config, ExperimentMode mode, int jobs, std::ostream& log);

/// Loads every <label>.hmm in `models_dir` and classifies the first line of
/// `sequence_file` (comma-separated symbols).
Classification cmd_classify(const std::filesystem::path& models_dir, const std::filesystem::path& sequence_file);

/// Trains one model from a file holding one comma-separated symbol sequence
/// per line and saves it to `model_path`.
TrainReport cmd_train(const std::filesystem::path& sequences_file, int states, int alphabet,
                      const TrainConfig& train, const std::filesystem::path& model_path);

/// Checks the config and, when dataset_root is set, loads the dataset and
/// checks the config against it.
void cmd_validate(const RunConfig& config, std::ostream& log);

/// Comma-separated symbol lines, blank lines skipped. Throws ParseError.
std::vector<std::vector<int>> read_symbol_lines(const std::filesystem::path& path);

}  // namespace cphmm::cli
