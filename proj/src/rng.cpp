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

#include "meml/rng.hpp"

namespace meml {

std::string to_string(StreamPurpose purpose) {
  switch (purpose) {
    case StreamPurpose::kTaskDraw:
      return "task-draw";
    case StreamPurpose::kActions:
      return "actions";
    case StreamPurpose::kNoise:
      return "noise";
    case StreamPurpose::kExplorationChoice:
      return "exploration-choice";
  }
  return "unknown";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_name(const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t root_seed, const StreamKey& key) {
  std::uint64_t h = splitmix64(root_seed);
  for (std::uint64_t part :
       {key.scenario, key.replication, static_cast<std::uint64_t>(key.phase),
        key.environment, key.task, static_cast<std::uint64_t>(key.purpose),
        key.policy}) {
    h = splitmix64(h ^ splitmix64(part));
  }
  return h;
}

}  // namespace meml
