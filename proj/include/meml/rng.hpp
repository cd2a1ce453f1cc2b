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

#include <cstdint>
#include <random>
#include <string>

namespace meml {

using Engine = std::mt19937_64;

// What a random stream is used for. Streams with different purposes never
// share state, so adding draws for one purpose cannot shift another.
enum class StreamPurpose : std::uint64_t {
  kTaskDraw = 1,
  kActions = 2,
  kNoise = 3,
  kExplorationChoice = 4,
};

enum class Phase : std::uint64_t {
  kTest = 0,
  kTraining = 1,
  kDiagnostics = 2,
};

std::string to_string(StreamPurpose purpose);

// Hierarchical address of one independent stream under a root seed.
//
// Task-level streams (task draw, actions, noise) leave `policy` at 0 so that
// every policy evaluated on test task i sees the same task, action sets and
// noise. Only the exploration-choice stream is keyed by policy.
struct StreamKey {
  std::uint64_t scenario = 0;
  std::uint64_t replication = 0;
  Phase phase = Phase::kTest;
  std::uint64_t environment = 0;
  std::uint64_t task = 0;
  StreamPurpose purpose = StreamPurpose::kTaskDraw;
  std::uint64_t policy = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stable 64-bit hash of a string (FNV-1a), used to key scenarios by name.
std::uint64_t hash_name(const std::string& name);

std::uint64_t derive_seed(std::uint64_t root_seed, const StreamKey& key);

inline Engine make_engine(std::uint64_t root_seed, const StreamKey& key) {
  return Engine(derive_seed(root_seed, key));
}

}  // namespace meml
