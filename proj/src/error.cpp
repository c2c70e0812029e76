// Copyright 2026 The gbsim Authors
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

#include "gbs/error.hpp"

namespace gbs {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::Unphysical: return "Unphysical";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NearSingularQ: return "NearSingularQ";
    case ErrorCode::ImpureBlockStructure: return "ImpureBlockStructure";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::TransmissionOutOfRange: return "TransmissionOutOfRange";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NegativeMultiplicity: return "NegativeMultiplicity";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::CutoffMassTooSmall: return "CutoffMassTooSmall";
    case ErrorCode::TooManyPatterns: return "TooManyPatterns";
    }
    return "Unknown";
}

}  // namespace gbs
