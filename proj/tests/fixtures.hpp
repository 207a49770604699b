// Copyright 2026 The psiont Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <vector>

#include "psiont/linalg.hpp"

namespace fixtures {

/// e0, e1 and (1/2, 1/sqrt2, 1/2): pairwise overlaps 0, 1/2 and 1/sqrt2.
inline std::vector<psiont::ComplexVector> three_state_catalog() {
  psiont::ComplexVector c(3);
  c << 0.5, std::sqrt(0.5), 0.5;
  return {psiont::basis_vector(3, 0), psiont::basis_vector(3, 1), c};
}

inline std::vector<psiont::ComplexVector> qubit_pair() {
  psiont::ComplexVector plus(2);
  plus << std::sqrt(0.5), std::sqrt(0.5);
  return {psiont::basis_vector(2, 0), plus};
}

}  // namespace fixtures
