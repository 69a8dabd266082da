// Copyright 2026 The nes-lra Authors
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

#ifndef NES_LRA_ERROR_HPP_
#define NES_LRA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace nes_lra {

enum class ErrorCode {
  kInvalidConfig,
  kInvalidInput,
  kInvalidMatrix,
  kSingularMatrix,
  kNumericalFailure,
  kIo,
};

const char* ToString(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// C boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace nes_lra

#endif  // NES_LRA_ERROR_HPP_
