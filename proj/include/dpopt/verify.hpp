//
// Copyright 2026 The dpopt Authors
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
//

#pragma once

#include <cstdint>
#include <iosfwd>

namespace dpopt {

struct VerifyOptions {
  bool quick = false;            // halve trial counts
  double sigma_mutation = 1.0;   // test hook: corrupts the noise scale
  std::uint64_t seed = 20260810;
};

// Desk-scale acceptance checks; prints one pass/fail row per check and
// returns the number of failing rows.
int run_verify(std::ostream& out, const VerifyOptions& options = {});

}  // namespace dpopt
