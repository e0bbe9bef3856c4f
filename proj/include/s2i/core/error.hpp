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

#include <stdexcept>
#include <string>

namespace s2i {

// Bad arguments: shapes, ranges, lengths, unknown words.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A stage was invoked before its dependencies exist (missing checkpoint,
// unfrozen teacher, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite losses, failed matrix square roots, diverged training.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system and format problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stable machine-readable tag for an exception, used by the CLI error JSON.
std::string error_kind(const std::exception& e);

}  // namespace s2i
