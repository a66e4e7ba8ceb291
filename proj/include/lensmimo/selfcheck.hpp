// SPDX-License-Identifier: Apache-2.0
//
// lensmimo: uplink interference analysis for lens antenna arrays
// Copyright (C) 2026 The lensmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

namespace lensmimo {

struct SelfCheckOptions {
  unsigned threads = 1;
  // Test hook: perturbs the closed form's numerator constant by one part in a
  // million so the equivalence check must fail.
  bool corrupt_closed_form = false;
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Oracle-equivalence and invariant checks at small default sizes.
std::vector<CheckOutcome> run_selfcheck(const SelfCheckOptions& options = {});

}  // namespace lensmimo
