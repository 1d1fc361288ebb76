#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "cphmm/error.hpp"
#include "cphmm/numeric_io.hpp"

namespace {

using cphmm::cli::RunConfig;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;
  std::string dataset;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config, "Run configuration (JSON)");
  if (needs_config) opt->required();
  cmd->add_option("--seed", flags.seed, "Override the configured seed");
  cmd->add_option("--out", flags.out, "Override the output directory");
  cmd->add_option("--dataset", flags.dataset, "Override dataset_root");
}

RunConfig resolve_config(const CommonFlags& flags) {
  RunConfig config = flags.config.empty() ? RunConfig{} : cphmm::cli::load_run_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output_dir = flags.out;
  if (!flags.dataset.empty()) config.dataset_root = flags.dataset;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-point state-count prediction for discrete HMMs"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset from a spec file");
  std::string spec_file;
  generate->add_option("--spec", spec_file, "Synthetic spec (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out", flags.out, "Dataset directory to create")->required();
  generate->add_option("--seed", flags.seed, "Override the spec seed");

  auto* stats = app.add_subcommand("stats", "Critical-point tables for a dataset");
  add_common(stats, flags, false);

  auto* experiment = app.add_subcommand("experiment", "Run the AIC sweep and xi evaluation");
  add_common(experiment, flags, false);
  std::string mode = "A";
  experiment->add_option("--mode", mode, "A: pooled over c, B: grouped by c")
      ->check(CLI::IsMember({"A", "B"}));
  experiment->add_option("--jobs", flags.jobs, "Worker threads for the sweep (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* classify = app.add_subcommand("classify", "Label a symbol sequence with the most likely model");
  std::string models_dir, sequence_file;
  classify->add_option("--models", models_dir, "Directory of <label>.hmm files")->required();
  classify->add_option("--sequence", sequence_file, "File with one comma-separated symbol sequence")
      ->required();

  auto* train = app.add_subcommand("train", "Fit one HMM to symbol sequences");
  std::string train_file, model_out;
  int states = 2, alphabet = 2;
  cphmm::TrainConfig train_config;
  train->add_option("--sequences", train_file, "One comma-separated symbol sequence per line")->required();
  train->add_option("--states", states, "Number of hidden states")->required();
  train->add_option("--alphabet", alphabet, "Alphabet size")->required();
  train->add_option("--out", model_out, "Model file to write")->required();
  train->add_option("--seed", train_config.seed, "Training seed");
  train->add_option("--restarts", train_config.restarts, "Random restarts");

  auto* validate = app.add_subcommand("validate", "Check a config and its dataset");
  add_common(validate, flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) {
      const auto d = cphmm::cli::cmd_generate(spec_file, flags.out, flags.seed);
      std::cout << "generated I=" << d.gestures() << " J=" << d.sensors() << " K=" << d.executions() << " into "
                << flags.out << '\n';
    } else if (*stats) {
      cphmm::cli::cmd_stats(resolve_config(flags), std::cout);
    } else if (*experiment) {
      cphmm::cli::cmd_experiment(resolve_config(flags),
                                 mode == "A" ? cphmm::cli::ExperimentMode::A : cphmm::cli::ExperimentMode::B,
                                 flags.jobs, std::cout);
    } else if (*classify) {
      const auto result = cphmm::cli::cmd_classify(models_dir, sequence_file);
      std::cout << result.label << '\n';
      for (const auto& [label, ll] : result.scores) {
        std::cout << label << '\t' << cphmm::format_double(ll) << '\n';
      }
    } else if (*train) {
      const auto report = cphmm::cli::cmd_train(train_file, states, alphabet, train_config, model_out);
      std::cout << "iterations " << report.iterations << " loglik "
                << cphmm::format_double(report.loglik_trace.back()) << '\n';
    } else if (*validate) {
      cphmm::cli::cmd_validate(resolve_config(flags), std::cout);
    }
  } catch (const cphmm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cphmm::exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
