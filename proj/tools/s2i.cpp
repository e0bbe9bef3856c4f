/*
 * Copyright 2026 The s2i Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "s2i/core/error.hpp"
#include "s2i/pipeline/commands.hpp"

namespace {

std::vector<std::string> split_items(const std::string& list) {
  std::vector<std::string> items;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) items.push_back(item);
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech-to-image translation: data, training, evaluation and ablations"};
  app.require_subcommand(1);

  std::string config_path, out, name, loss_items, plan = "loss", clip_a, clip_b;
  std::uint64_t seed = 0;
  int scales = 0;
  bool test_mode = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "root seed (overrides the config)");
  app.add_option("--out", out, "output root (runs/<name>/ is created below it)");
  app.add_option("--name", name, "run name");
  app.add_option("--scales", scales, "generator scales")->check(CLI::Range(1, 3));
  app.add_option("--loss-items", loss_items, "comma list drawn from norm,jel,kdl");
  app.add_flag("--test-mode", test_mode, "single thread and deterministic kernels");

  auto* prepare = app.add_subcommand("prepare-data", "render the synthetic dataset into the run directory");
  auto* train_encoder = app.add_subcommand("train-encoder", "train the teacher and the speech encoder");
  auto* train_gan = app.add_subcommand("train-gan", "train the conditional GAN on frozen speech embeddings");
  auto* evaluate = app.add_subcommand("evaluate", "IS / FID on unseen classes and sample grids");
  auto* interpolate = app.add_subcommand("interpolate", "9-frame strip between two spoken descriptions");
  interpolate->add_option("--clip-a", clip_a, "WAV file for alpha = 1")->required()->check(CLI::ExistingFile);
  interpolate->add_option("--clip-b", clip_b, "WAV file for alpha = 0")->required()->check(CLI::ExistingFile);
  auto* ablate = app.add_subcommand("ablate", "loss-item or generator-scale ablation table");
  ablate->add_option("--plan", plan, "loss or scales");

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace s2i::pipeline;
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (!name.empty()) cfg.name = name;
    if (scales) cfg.gan.net.scales = scales;
    if (!loss_items.empty()) cfg.encoder.train.weights.set_loss_items(split_items(loss_items));
    if (test_mode) cfg.test_mode = true;
    cfg.resolve();

    nlohmann::json result;
    if (*prepare) {
      result = cmd_prepare_data(cfg);
    } else if (*train_encoder) {
      result = cmd_train_encoder(cfg);
    } else if (*train_gan) {
      result = cmd_train_gan(cfg);
    } else if (*evaluate) {
      result = cmd_evaluate(cfg);
    } else if (*interpolate) {
      const auto strip = cmd_interpolate(cfg, clip_a, clip_b);
      result = {{"frames", strip.frames.size(0)},
                {"alphas", strip.alphas},
                {"strip", (cfg.run_dir() / "samples" / "interpolation.png").string()}};
    } else if (*ablate) {
      const auto table = cmd_ablate(cfg, ablation_axis_from_string(plan));
      std::cout << table.markdown();
      return 0;
    }
    std::cout << result.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", s2i::error_kind(e)}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
}
