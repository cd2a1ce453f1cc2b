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

#include "meml/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace meml::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

void write_regret_csv(std::ostream& out, const std::string& scenario,
                      const std::vector<TransferRun>& replications) {
  out << "scenario,policy,replication,task_index,round,instant_regret,cum_regret\n";
  if (replications.empty()) return;
  const auto& policies = replications.front().policies;
  for (std::size_t p = 0; p < policies.size(); ++p) {
    const std::string label = policy_label(policies[p]);
    for (std::size_t r = 0; r < replications.size(); ++r) {
      for (const auto& task : replications[r].runs[p]) {
        const auto& trace = task.trace;
        for (std::size_t t = 0; t < trace.instant.size(); ++t) {
          out << scenario << ',' << label << ',' << r << ',' << task.task_index << ',' << t + 1
              << ',' << format_double(trace.instant[t]) << ','
              << format_double(trace.cumulative[t]) << '\n';
        }
      }
    }
  }
}

void write_transfer_csv(std::ostream& out, const std::string& scenario,
                        const TransferRegretEstimate& estimate) {
  out << "scenario,policy,round,mean_cum_regret,std_cum_regret,n\n";
  for (const auto& curve : estimate.curves) {
    const std::string label = policy_label(curve.policy);
    for (std::size_t t = 0; t < curve.mean.size(); ++t) {
      out << scenario << ',' << label << ',' << t + 1 << ',' << format_double(curve.mean[t])
          << ',' << format_double(curve.stddev[t]) << ',' << curve.n << '\n';
    }
  }
}

void write_bounds_csv(std::ostream& out, const std::string& scenario, const BoundReport& report) {
  out << "scenario,round,single_task,single_bias_transfer,meml_transfer\n";
  for (std::size_t t = 0; t < report.meml_transfer_curve.size(); ++t) {
    out << scenario << ',' << t + 1 << ',' << format_double(report.single_task_curve[t]) << ','
        << format_double(report.single_bias_transfer_curve[t]) << ','
        << format_double(report.meml_transfer_curve[t]) << '\n';
  }
}

}  // namespace meml::io
