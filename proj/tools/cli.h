// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>

namespace qcausal {

enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitInputError = 2,
  kExitIndeterminate = 3,
};

/// Report verbosity from QCAUSAL_VERBOSITY: 0 summary only, 1 normal, 2 detailed.
int report_verbosity();

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qcausal
