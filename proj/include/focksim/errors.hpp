// Copyright 2026 The focksim Authors
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

#ifndef FOCKSIM_ERRORS_HPP
#define FOCKSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace focksim {

/// Raised when an argument violates an operation's precondition
/// (register mismatch, non-unitary matrix, out-of-range parameter).
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a request exceeds a fixed numeric capacity
/// (photon-number limits, integer overflow).
class CapacityError : public std::length_error {
   public:
    using std::length_error::length_error;
};

}  // namespace focksim

#endif
