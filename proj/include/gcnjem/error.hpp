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

#ifndef GCNJEM_ERROR_HPP_
#define GCNJEM_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcnjem {

enum class ErrorCode {
  kDimensionMismatch,
  kNonFiniteValue,
  kIndexOutOfRange,
  kExistingSelfLoop,
  kZeroDegree,
  kSelfEdgeRejected,
  kNotSymmetric,
  kConvergenceFailure,
  kUnrecordedSlot,
  kEmptyMask,
  kZeroNormalizer,
  kNonFiniteLoss,
  kNonFiniteSample,
  kInvalidConfig,
  kMissingFile,
  kRaggedFeatureRows,
  kLabelOutOfRange,
  kParseError,
  kCorruptMagic,
  kTruncatedFile,
  kConfidenceOutOfRange,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gcnjem

#endif  // GCNJEM_ERROR_HPP_
