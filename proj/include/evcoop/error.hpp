// Copyright 2026 The evcoop Authors.
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

#ifndef EVCOOP_ERROR_HPP
#define EVCOOP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace evcoop {

enum class Errc {
  kParse,
  kUnreadableFile,
  kMissingColumn,
  kDanglingReference,
  kDisconnectedGraph,
  kHorizonTooShort,
  kEmptyFleet,
  kInvalidRequest,
  kInvalidVehicle,
  kInvalidCharger,
  kInvalidEdge,
  kInvalidGrid,
  kDuplicateId,
  kOverlappingFleets,
  kMissingCharger,
  kPlayerCountOutOfRange,
  kNotRadial,
  kDimensionMismatch,
  kInfeasibleBase,
  kNoNodesAvailable,
  kIncompleteFunction,
  kNonFiniteValue,
  kDimensionTooLarge,
  kEmptyCore,
  kInvalidPrior,
  kInvalidArgument,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kParse: return "Parse";
    case Errc::kUnreadableFile: return "UnreadableFile";
    case Errc::kMissingColumn: return "MissingColumn";
    case Errc::kDanglingReference: return "DanglingReference";
    case Errc::kDisconnectedGraph: return "DisconnectedGraph";
    case Errc::kHorizonTooShort: return "HorizonTooShort";
    case Errc::kEmptyFleet: return "EmptyFleet";
    case Errc::kInvalidRequest: return "InvalidRequest";
    case Errc::kInvalidVehicle: return "InvalidVehicle";
    case Errc::kInvalidCharger: return "InvalidCharger";
    case Errc::kInvalidEdge: return "InvalidEdge";
    case Errc::kInvalidGrid: return "InvalidGrid";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kOverlappingFleets: return "OverlappingFleets";
    case Errc::kMissingCharger: return "MissingCharger";
    case Errc::kPlayerCountOutOfRange: return "PlayerCountOutOfRange";
    case Errc::kNotRadial: return "NotRadial";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kInfeasibleBase: return "InfeasibleBase";
    case Errc::kNoNodesAvailable: return "NoNodesAvailable";
    case Errc::kIncompleteFunction: return "IncompleteFunction";
    case Errc::kNonFiniteValue: return "NonFiniteValue";
    case Errc::kDimensionTooLarge: return "DimensionTooLarge";
    case Errc::kEmptyCore: return "EmptyCore";
    case Errc::kInvalidPrior: return "InvalidPrior";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Every failure surfaced by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace evcoop

#endif  // EVCOOP_ERROR_HPP
