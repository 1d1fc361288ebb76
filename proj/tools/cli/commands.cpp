#include "cli/commands.hpp"

#include <algorithm>

#include "cphmm/error.hpp"
#include "cphmm/numeric_io.hpp"
#include "cphmm/pipeline.hpp"
#include "cphmm/report.hpp"

namespace cphmm::cli {
namespace {

RawDataset load_configured_dataset(const RunConfig& config) {
  if (config.dataset_root.empty()) throw Error(ErrorCode::ConfigError, "dataset_root is not set");
  auto dataset = load_dataset(config.dataset_root);
  config.validate_for(dataset.sensors());
  return dataset;
}

void report_exclusions(const PreprocessResult& processed, std::ostream& log) {
  for (const auto& id : processed.excluded) {
    log << "excluded constant row i=" << id.gesture + 1 << " j=" << id.sensor + 1 << " k=" << id.execution + 1
        << '\n';
  }
}

}  // namespace

RawDataset cmd_generate(const std::filesystem::path& spec_file, const std::filesystem::path& out_dir,
                        std::optional<std::uint64_t> seed_override) {
  auto spec = synthetic_spec_from_json(read_text_file(spec_file));
  if (seed_override) spec.seed = *seed_override;
  auto dataset = generate_synthetic(spec);
  save_dataset(dataset, out_dir, spec);
  return dataset;
}

void cmd_stats(const RunConfig& config, std::ostream& log) {
  const auto dataset = load_configured_dataset(config);
  const auto ranges = config.ranges_for(dataset.sensors());
  const auto processed = preprocess_dataset(dataset, config.resample_length);
  report_exclusions(processed, log);
  const auto table = critical_point_table(processed, config.gamma);

  write_text_file(config.output_dir / "cp_by_gesture.csv", cp_by_gesture_csv(table, dataset.gestures(), ranges));
  write_text_file(config.output_dir / "cp_by_sensor.csv",
                  cp_by_sensor_csv(table, dataset.gestures(), dataset.sensors()));
  write_text_file(config.output_dir / "cp_medians.csv", cp_medians_csv(table));
  log << "wrote critical-point tables to " << config.output_dir.string() << '\n';
}

void cmd_experiment(const RunConfig& config, ExperimentMode mode, int jobs, std::ostream& log) {
  const auto dataset = load_configured_dataset(config);
  const auto ranges = config.ranges_for(dataset.sensors());
  const auto run = run_pipeline(dataset, config.pipeline(jobs));
  report_exclusions(run.processed, log);

  const auto& out = config.output_dir;
  write_text_file(out / "records.csv", records_csv(run.records));
  write_text_file(out / "sweeps.csv", sweeps_csv(run.sweeps));
  write_text_file(out / "cp_medians.csv", cp_medians_csv(run.cps));
  for (const auto& [c, codebook] : run.codebooks) {
    save_codebook(codebook, out / "codebooks" / ("c" + std::to_string(c) + ".txt"));
  }
  if (mode == ExperimentMode::A) {
    const auto rows = experiment_a(run.records, config.variants, ranges);
    write_text_file(out / "xi_by_variant.csv", aggregate_csv(rows, config.variants));
    write_text_file(out / "xi_by_gesture.csv", group_means_csv(xi_by_gesture(run.records), "gesture", config.variants));
    write_text_file(out / "xi_by_sensor.csv", group_means_csv(xi_by_sensor(run.records), "sensor", config.variants));
  } else {
    const auto rows = experiment_b(run.records, config.variants, ranges);
    write_text_file(out / "xi_by_cluster.csv", aggregate_csv(rows, config.variants));
  }
  log << "experiment " << (mode == ExperimentMode::A ? 'A' : 'B') << ": " << run.pairs.size() << " pairs, "
      << run.records.size() << " records written to " << out.string() << '\n';
}

std::vector<std::vector<int>> read_symbol_lines(const std::filesystem::path& path) {
  std::vector<std::vector<int>> out;
  const auto text = read_text_file(path);
  for (auto line : split(text, '\n')) {
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    std::vector<int> symbols;
    for (auto cell : split(line, ',')) symbols.push_back(static_cast<int>(parse_integer(cell)));
    out.push_back(std::move(symbols));
  }
  return out;
}

Classification cmd_classify(const std::filesystem::path& models_dir, const std::filesystem::path& sequence_file) {
  if (!std::filesystem::is_directory(models_dir)) {
    throw Error(ErrorCode::ModelLoadError, models_dir.string() + " is not a directory");
  }
  std::map<std::string, Hmm> models;
  for (const auto& entry : std::filesystem::directory_iterator(models_dir)) {
    if (entry.path().extension() != ".hmm") continue;
    models.emplace(entry.path().stem().string(), load_hmm(entry.path()));
  }
  if (models.empty()) throw Error(ErrorCode::ModelLoadError, "no .hmm files in " + models_dir.string());
  const auto lines = read_symbol_lines(sequence_file);
  if (lines.empty()) throw Error(ErrorCode::ParseError, sequence_file.string() + " holds no sequence");
  return classify(models, lines.front());
}

TrainReport cmd_train(const std::filesystem::path& sequences_file, int states, int alphabet,
                      const TrainConfig& train, const std::filesystem::path& model_path) {
  std::vector<SymbolSequence> sequences;
  int k = 0;
  for (auto& symbols : read_symbol_lines(sequences_file)) {
    SymbolSequence seq;
    seq.id.execution = k++;
    seq.alphabet = alphabet;
    seq.symbols = std::move(symbols);
    sequences.push_back(std::move(seq));
  }
  auto fit = baum_welch(sequences, states, alphabet, train);
  save_hmm(fit.model, model_path);
  return fit.report;
}

void cmd_validate(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.dataset_root.empty()) {
    log << "config ok (no dataset_root to check)\n";
    return;
  }
  const auto dataset = load_configured_dataset(config);
  std::size_t shortest = dataset.length(0, 0), longest = shortest;
  for (int i = 0; i < dataset.gestures(); ++i) {
    for (int k = 0; k < dataset.executions(); ++k) {
      shortest = std::min(shortest, dataset.length(i, k));
      longest = std::max(longest, dataset.length(i, k));
    }
  }
  log << "dataset ok: I=" << dataset.gestures() << " J=" << dataset.sensors() << " K=" << dataset.executions()
      << " lengths " << shortest << ".." << longest << '\n';
}

}  // namespace cphmm::cli
