// Copyright 2026 The GCN-JEM Authors.
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

#include "gcnjem/error.hpp"

namespace gcnjem {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kExistingSelfLoop: return "ExistingSelfLoop";
    case ErrorCode::kZeroDegree: return "ZeroDegree";
    case ErrorCode::kSelfEdgeRejected: return "SelfEdgeRejected";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kUnrecordedSlot: return "UnrecordedSlot";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kZeroNormalizer: return "ZeroNormalizer";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kNonFiniteSample: return "NonFiniteSample";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kRaggedFeatureRows: return "RaggedFeatureRows";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kCorruptMagic: return "CorruptMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kConfidenceOutOfRange: return "ConfidenceOutOfRange";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gcnjem
