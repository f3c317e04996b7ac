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

#include "hopfilter/error.hpp"

namespace hopfilter {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonStochastic: return "NonStochastic";
    case ErrorCode::kInvalidProbability: return "InvalidProbability";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroDisturbance: return "ZeroDisturbance";
    case ErrorCode::kNotTheorem1Ready: return "NotTheorem1Ready";
    case ErrorCode::kNonBernoulliChain: return "NonBernoulliChain";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kIllConditioned: return "IllConditioned";
    case ErrorCode::kUnknownPowerLevel: return "UnknownPowerLevel";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kBaselineInfeasible: return "BaselineInfeasible";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hopfilter
