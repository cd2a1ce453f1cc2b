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

#include <cmath>
#include <initializer_list>

#include "meml/environments.hpp"

namespace meml::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Two Gaussian environments with total task variance `variance` each.
inline MixtureSpec two_gaussians(const Vector& mu1, const Vector& mu2, double variance,
                                 double p1 = 0.5) {
  const double sigma = std::sqrt(variance / static_cast<double>(mu1.size()));
  MixtureSpec m;
  m.environments = {{mu1, EntryNoise::gaussian(sigma), sigma},
                    {mu2, EntryNoise::gaussian(sigma), sigma}};
  m.probabilities = {p1, 1.0 - p1};
  return m;
}

}  // namespace meml::testing
