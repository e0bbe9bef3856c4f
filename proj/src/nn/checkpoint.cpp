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

#include "s2i/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "s2i/core/error.hpp"

namespace s2i::nn {

namespace {

constexpr char kMagic[8] = {'S', '2', 'I', 'C', 'K', 'P', 'T', '\0'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("truncated checkpoint");
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in, std::size_t len) {
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw IoError("truncated checkpoint");
  return s;
}

std::uint8_t dtype_code(torch::ScalarType t) {
  switch (t) {
    case torch::kFloat32:
      return 0;
    case torch::kFloat64:
      return 1;
    case torch::kInt64:
      return 2;
    default:
      throw InvalidInput("unsupported tensor dtype in checkpoint");
  }
}

torch::ScalarType dtype_from(std::uint8_t code) {
  switch (code) {
    case 0:
      return torch::kFloat32;
    case 1:
      return torch::kFloat64;
    case 2:
      return torch::kInt64;
    default:
      throw IoError("unknown dtype code in checkpoint");
  }
}

std::map<std::string, torch::Tensor> named_state(const torch::nn::Module& module) {
  std::map<std::string, torch::Tensor> state;
  for (const auto& p : module.named_parameters(true)) state[p.key()] = p.value();
  for (const auto& b : module.named_buffers(true)) state[b.key()] = b.value();
  return state;
}

}  // namespace

Checkpoint snapshot(const torch::nn::Module& module, std::string kind, nlohmann::json config) {
  Checkpoint ck{std::move(kind), std::move(config), {}};
  for (auto& [name, t] : named_state(module)) ck.tensors[name] = t.detach().clone().contiguous();
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, ck.kind);
  const std::string cfg = ck.config.dump();
  put<std::uint64_t>(out, cfg.size());
  out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ck.tensors.size()));
  for (const auto& [name, tensor] : ck.tensors) {
    const auto t = tensor.detach().cpu().contiguous();
    put_string(out, name);
    put<std::uint8_t>(out, dtype_code(t.scalar_type()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dim()));
    for (auto d : t.sizes()) put<std::int64_t>(out, d);
    out.write(static_cast<const char*>(t.data_ptr()), static_cast<std::streamsize>(t.nbytes()));
  }
  if (!out) throw IoError("short write to checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint not found: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw IoError(path.string() + " is not an s2i checkpoint");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  ck.kind = get_string(in, get<std::uint32_t>(in));
  ck.config = nlohmann::json::parse(get_string(in, get<std::uint64_t>(in)));
  const auto count = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto name = get_string(in, get<std::uint32_t>(in));
    const auto dtype = dtype_from(get<std::uint8_t>(in));
    const auto ndim = get<std::uint32_t>(in);
    std::vector<std::int64_t> dims(ndim);
    for (auto& d : dims) d = get<std::int64_t>(in);
    auto t = torch::empty(dims, torch::TensorOptions().dtype(dtype));
    in.read(static_cast<char*>(t.data_ptr()), static_cast<std::streamsize>(t.nbytes()));
    if (!in) throw IoError("truncated tensor '" + name + "' in " + path.string());
    ck.tensors.emplace(std::move(name), std::move(t));
  }
  return ck;
}

void restore(torch::nn::Module& module, const Checkpoint& ck, const std::string& expected_kind) {
  if (ck.kind != expected_kind)
    throw InvalidInput("checkpoint kind '" + ck.kind + "' where '" + expected_kind + "' was expected");
  torch::NoGradGuard no_grad;
  for (auto& [name, dst] : named_state(module)) {
    const auto it = ck.tensors.find(name);
    if (it == ck.tensors.end()) throw IoError("checkpoint lacks tensor '" + name + "'");
    if (it->second.sizes() != dst.sizes())
      throw IoError("shape mismatch for tensor '" + name + "'");
    dst.copy_(it->second);
  }
}

std::uint64_t parameter_hash(const torch::nn::Module& module) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& [name, tensor] : named_state(module)) {
    for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
    const auto t = tensor.detach().cpu().contiguous();
    const auto* bytes = static_cast<const unsigned char*>(t.data_ptr());
    for (std::size_t i = 0; i < t.nbytes(); ++i) h = (h ^ bytes[i]) * 1099511628211ULL;
  }
  return h;
}

}  // namespace s2i::nn
