// Copyright 2026 The hopfilter Authors
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

#include <string>

#include "hopfilter/tradeoff.hpp"

namespace hopfilter {

// Static chart of upsilon_h and upsilon_e against L, one panel per p laid
// out two per row. Infeasible points break the upsilon_h line. Output depends
// only on the sweep data.
std::string sweep_svg(const SweepResult& result);

}  // namespace hopfilter
