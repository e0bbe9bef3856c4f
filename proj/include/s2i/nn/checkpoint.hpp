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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

namespace s2i::nn {

// On-disk layout (little-endian):
//   "S2ICKPT\0" | u32 version | u32 len, kind | u64 len, config JSON |
//   u32 count | count x { u32 len, name | u8 dtype | u32 ndim | i64 dims[ndim] | raw data }
// dtype: 0 = float32, 1 = float64, 2 = int64.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string kind;
  nlohmann::json config;
  std::map<std::string, torch::Tensor> tensors;
};

// Collects parameters and buffers of `module` under their dotted names.
Checkpoint snapshot(const torch::nn::Module& module, std::string kind, nlohmann::json config);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies tensors into the module. Every parameter and buffer must be
// present with a matching shape; `expected_kind` guards against loading a
// GAN checkpoint into an encoder and the like.
void restore(torch::nn::Module& module, const Checkpoint& checkpoint, const std::string& expected_kind);

// FNV-1a hash over the raw bytes of every parameter and buffer, in name order.
std::uint64_t parameter_hash(const torch::nn::Module& module);

}  // namespace s2i::nn
