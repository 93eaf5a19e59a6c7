/*
Copyright 2026 The legodnn Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace legodnn {

using Bytes = std::int64_t;
/// Durations in microseconds. Estimates are fractional; observations and
/// budgets are usually whole microseconds but nothing depends on that.
using Micros = double;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (bad JSON, wrong schema version, wrong field types).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Well-formed input that breaks a precondition or invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// No selection satisfies the requested budgets.
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

}  // namespace legodnn
