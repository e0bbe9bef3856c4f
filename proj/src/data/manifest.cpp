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

#include "s2i/data/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "s2i/audio/wav.hpp"
#include "s2i/core/error.hpp"

namespace s2i::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

Shape shape_from_name(const std::string& name) {
  for (int s = 0; s < kNumShapes; ++s)
    if (shape_name(static_cast<Shape>(s)) == name) return static_cast<Shape>(s);
  throw IoError("unknown shape '" + name + "' in classes.json");
}

int color_from_word(const std::string& word) {
  for (int c = 0; c < kNumColors; ++c)
    if (fill_word(c) == word) return c;
  throw IoError("unknown colour '" + word + "' in classes.json");
}

}  // namespace

ManifestLoad load_manifest(const fs::path& path, const ManifestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("manifest not found: " + path.string());
  const fs::path base = path.parent_path();

  ManifestLoad result;
  auto& ds = result.dataset;
  std::map<fs::path, int> image_index;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (line_no == 1 && fields.size() == 3 && fields[0] == "wav_path") continue;
    try {
      if (fields.size() != 3) throw IoError("expected 3 fields, got " + std::to_string(fields.size()));
      int label = 0;
      const auto& id = fields[2];
      const auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), label);
      if (ec != std::errc() || ptr != id.data() + id.size() || label < 0)
        throw IoError("class_id '" + id + "' is not a non-negative integer");

      const fs::path wav = resolve(base, fields[0]);
      const fs::path img = resolve(base, fields[1]);
      auto clip = audio::read_wav(wav, options.sample_rate);
      auto spec = audio::spectrogram(clip);
      if (spec.frames < audio::kMinEncoderFrames)
        throw InvalidInput("clip yields " + std::to_string(spec.frames) + " frames, fewer than " +
                           std::to_string(audio::kMinEncoderFrames));

      int image = -1;
      if (auto it = image_index.find(img); it != image_index.end()) {
        image = it->second;
        if (ds.image_labels[image] != label)
          throw IoError("image " + img.string() + " listed with conflicting class ids");
      } else {
        auto picture = resize(read_png(img), options.image_size, options.image_size);
        image = static_cast<int>(ds.images.size());
        ds.images.push_back(std::move(picture));
        ds.image_labels.push_back(label);
        image_index.emplace(img, image);
      }
      Utterance u;
      u.spec = std::move(spec);
      u.image = image;
      u.label = label;
      u.wav_path = wav;
      ds.utterances.push_back(std::move(u));
    } catch (const std::exception& e) {
      result.skipped.push_back({line_no, e.what()});
    }
  }
  if (ds.utterances.empty())
    throw IoError("manifest " + path.string() + " produced no usable rows (" +
                  std::to_string(result.skipped.size()) + " skipped)");

  std::set<int> present(ds.image_labels.begin(), ds.image_labels.end());
  const fs::path classes_path = base / "classes.json";
  if (fs::exists(classes_path)) {
    std::ifstream cf(classes_path);
    const json j = json::parse(cf);
    for (const auto& c : j.at("classes")) {
      ds.classes.push_back({c.at("class_id").get<int>(),
                            shape_from_name(c.at("shape").get<std::string>()),
                            color_from_word(c.at("fill").get<std::string>()),
                            color_from_word(c.at("accent").get<std::string>())});
    }
    ds.split.train_classes = j.at("train_classes").get<std::vector<int>>();
    ds.split.test_classes = j.at("test_classes").get<std::vector<int>>();
    ds.split.samples_per_class = j.value("samples_per_class", 0);
    std::sort(ds.split.train_classes.begin(), ds.split.train_classes.end());
    std::sort(ds.split.test_classes.begin(), ds.split.test_classes.end());
  } else {
    const std::vector<int> ids(present.begin(), present.end());
    const auto idx = build_splits(static_cast<int>(ids.size()), options.train_fraction, 1, options.seed);
    for (int i : idx.train_classes) ds.split.train_classes.push_back(ids[i]);
    for (int i : idx.test_classes) ds.split.test_classes.push_back(ids[i]);
    ds.split.samples_per_class =
        static_cast<int>(ds.images.size() / std::max<std::size_t>(1, ids.size()));
  }
  return result;
}

void write_dataset(const fs::path& dir, const PairedDataset& dataset) {
  fs::create_directories(dir / "images");
  fs::create_directories(dir / "audio");
  char name[64];
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    std::snprintf(name, sizeof(name), "img_%06zu.png", i);
    write_png(dir / "images" / name, dataset.images[i]);
  }
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw IoError("cannot write manifest in " + dir.string());
  manifest << "wav_path,image_path,class_id\n";
  for (std::size_t u = 0; u < dataset.utterances.size(); ++u) {
    const auto& utt = dataset.utterances[u];
    std::snprintf(name, sizeof(name), "utt_%06zu.wav", u);
    audio::write_wav(dir / "audio" / name, dataset.sample(static_cast<int>(u)).clip);
    char img[64];
    std::snprintf(img, sizeof(img), "img_%06d.png", utt.image);
    manifest << "audio/" << name << ",images/" << img << "," << utt.label << "\n";
  }

  json j;
  j["classes"] = json::array();
  for (const auto& c : dataset.classes) {
    j["classes"].push_back({{"class_id", c.class_id},
                            {"shape", std::string(shape_name(c.shape))},
                            {"fill", std::string(fill_word(c.fill))},
                            {"accent", std::string(fill_word(c.accent))},
                            {"description", describe(c, 0)}});
  }
  j["train_classes"] = dataset.split.train_classes;
  j["test_classes"] = dataset.split.test_classes;
  j["samples_per_class"] = dataset.split.samples_per_class;
  std::ofstream(dir / "classes.json") << j.dump(2) << "\n";
}

}  // namespace s2i::data
