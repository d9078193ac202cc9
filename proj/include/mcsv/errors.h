// include/mcsv/errors.h

// Copyright 2026 The mcsv Authors

// See COPYING at the top of the tree for clarification regarding multiple
// authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef MCSV_ERRORS_H_
#define MCSV_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcsv {

// Error classes. File-format codes are distinct so callers can tell a
// corrupt container from a bad argument.
enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kLookup,
  kSize,
  kValidation,
  kUndefinedOnClean,
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kDimensionOverflow,
  kTrailingData,
  kIo,
  kParse,
  kMining,
  kInsufficientData,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

inline void Require(bool cond, ErrorCode code, const std::string &what) {
  if (!cond) throw Error(code, what);
}

}  // namespace mcsv

#endif  // MCSV_ERRORS_H_
