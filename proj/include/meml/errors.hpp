// Copyright 2026 The MEML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace meml {

// Invalid user or scenario configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while a valid scenario was executing. Maps to CLI exit code 3.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientTrainingTasks : public ConfigError {
 public:
  explicit InsufficientTrainingTasks(int environment)
      : ConfigError("insufficient training tasks: environment " +
                    std::to_string(environment + 1) + " has no labeled records"),
        environment_(environment) {}

  // Zero-based environment index.
  int environment() const { return environment_; }

 private:
  int environment_;
};

}  // namespace meml
