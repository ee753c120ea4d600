// Command line front end: train / predict / eval / grid.
// Exit codes: 0 success, 1 validation or data failure, 2 usage/config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cmsa/pipeline.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cmsa::ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string embeddings;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

// Preset first, then config file, then individual flags; later layers win.
cmsa::ExperimentConfig build_config(const CommonOpts& opts) {
  cmsa::ExperimentConfig config;
  if (!opts.preset.empty()) config = cmsa::resolve_preset(opts.preset);
  if (!opts.config_path.empty()) {
    cmsa::apply_config_json(config, slurp(opts.config_path));
  }
  if (opts.seed_set) config.seed = opts.seed;
  if (!opts.embeddings.empty()) config.embeddings_path = opts.embeddings;
  return config;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file");
  cmd->add_option("--preset", opts.preset, "preset name (model1, model2)");
  cmd->add_option("--embeddings", opts.embeddings, "embedding table file");
  cmd->add_option("--seed", opts.seed, "random seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"code-mixed sentiment classification toolkit"};
  app.require_subcommand(1);

  CommonOpts train_opts, grid_opts;
  std::string train_data, train_out;
  auto* train = app.add_subcommand("train", "fit a model and report dev scores");
  add_common(train, train_opts);
  train->add_option("--data", train_data, "labeled corpus (JSON)")->required();
  train->add_option("--out", train_out, "path for the model artifact");

  std::string predict_model, predict_data, predict_out, predict_embeddings;
  auto* predict = app.add_subcommand("predict", "label a corpus with a trained model");
  predict->add_option("--model", predict_model, "model artifact")->required();
  predict->add_option("--data", predict_data, "corpus to label (JSON)")->required();
  predict->add_option("--out", predict_out, "prediction file to write")->required();
  predict->add_option("--embeddings", predict_embeddings,
                      "embedding table overriding the stored path");

  std::string eval_gold, eval_pred;
  auto* eval = app.add_subcommand("eval", "score a prediction file against gold labels");
  eval->add_option("--gold", eval_gold, "labeled corpus (JSON)")->required();
  eval->add_option("--pred", eval_pred, "prediction file")->required();

  std::string grid_data, grid_out;
  auto* grid = app.add_subcommand("grid", "run the fixed model/feature grid");
  add_common(grid, grid_opts);
  grid->add_option("--data", grid_data, "labeled corpus (JSON)")->required();
  grid->add_option("--out", grid_out, "grid report (JSON) to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train->parsed()) {
      const cmsa::ExperimentConfig config = build_config(train_opts);
      const cmsa::TrainResult result = cmsa::run_train(config, train_data, train_out);
      std::printf("model: %s   features: %s   seed: %llu\n",
                  cmsa::model_kind_name(config.model),
                  cmsa::feature_spec_name(config.features).c_str(),
                  static_cast<unsigned long long>(config.seed));
      std::printf("split: %zu train / %zu dev\n", result.n_train, result.n_dev);
      std::fputs(cmsa::render_report(result.dev_report).c_str(), stdout);
      if (!train_out.empty()) std::printf("artifact written to %s\n", train_out.c_str());
    } else if (predict->parsed()) {
      cmsa::run_predict(predict_model, predict_data, predict_out, predict_embeddings);
      std::printf("predictions written to %s\n", predict_out.c_str());
    } else if (eval->parsed()) {
      const cmsa::EvalReport report = cmsa::run_eval(eval_gold, eval_pred);
      std::fputs(cmsa::render_report(report).c_str(), stdout);
    } else if (grid->parsed()) {
      const cmsa::ExperimentConfig config = build_config(grid_opts);
      const cmsa::GridReport report = cmsa::run_grid(config, grid_data, grid_out);
      std::fputs(cmsa::render_grid(report).c_str(), stdout);
      if (!grid_out.empty()) std::printf("report written to %s\n", grid_out.c_str());
    }
  } catch (const cmsa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cmsa::PresetError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cmsa::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
