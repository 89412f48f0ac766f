// Copyright 2026 The qmeas Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Base class for all qmeas errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An input object violates a type invariant (not PSD, not stochastic, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Operands have incompatible dimensions or shapes.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A numerical contract was violated (lost precision, negative probability,
/// failed cross-check). Indicates a bug or an input outside the design
/// envelope rather than a user mistake.
class NumericError : public Error {
  public:
    using Error::Error;
};

/// A file could not be read, written, or parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

} // namespace qmeas
