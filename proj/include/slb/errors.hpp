// Copyright 2026 The slb Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace slb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The binomial parameters cannot be fitted (degenerate mean, overdispersion).
class FitError : public Error {
 public:
  using Error::Error;
};

/// The model is too large for exact enumeration; use sample_terms instead.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A bound was requested for a model it does not cover.
class ApplicabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace slb
