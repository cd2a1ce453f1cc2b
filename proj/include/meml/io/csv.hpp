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

#include <ostream>
#include <string>
#include <vector>

#include "meml/bounds.hpp"
#include "meml/meta_sim.hpp"

namespace meml::io {

// Shortest round-trip-safe text with 17 significant digits, independent of
// the C and C++ locales.
std::string format_double(double value);

// scenario,policy,replication,task_index,round,instant_regret,cum_regret
// Rows ordered by (policy, replication, task_index, round); rounds are 1-based.
void write_regret_csv(std::ostream& out, const std::string& scenario,
                      const std::vector<TransferRun>& replications);

// scenario,policy,round,mean_cum_regret,std_cum_regret,n
void write_transfer_csv(std::ostream& out, const std::string& scenario,
                        const TransferRegretEstimate& estimate);

// scenario,round,single_task,single_bias_transfer,meml_transfer
void write_bounds_csv(std::ostream& out, const std::string& scenario, const BoundReport& report);

}  // namespace meml::io
