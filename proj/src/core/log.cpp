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

#include "s2i/core/log.hpp"

#include <iostream>
#include <mutex>

namespace s2i {

namespace {
std::mutex g_mutex;
WarningSink g_sink;
bool g_quiet = false;
}  // namespace

void warn(std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (g_sink)
    g_sink(message);
  else
    std::cerr << "warning: " << message << "\n";
}

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(g_mutex);
  auto old = std::move(g_sink);
  g_sink = std::move(sink);
  return old;
}

void info(std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (!g_quiet) std::cerr << message << "\n";
}

void set_quiet(bool quiet) {
  std::lock_guard lock(g_mutex);
  g_quiet = quiet;
}

}  // namespace s2i
