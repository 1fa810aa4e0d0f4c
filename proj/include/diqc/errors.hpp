// Copyright 2026 The diqc Authors
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

namespace diqc {

// Base of every error raised by the library. Subclasses group failures the
// command-line layer maps onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that are structurally malformed: wrong dimensions, mismatched
// register labels, non-Hermitian input to a Hermitian routine.
class DimensionError : public Error {
 public:
  using Error::Error;
};
class ContractError : public Error {
 public:
  using Error::Error;
};
class StructureError : public Error {
 public:
  using Error::Error;
};

// Numerically invalid quantum objects.
class NotPsdError : public Error {
 public:
  using Error::Error;
};
class NormalizationError : public Error {
 public:
  using Error::Error;
};
class ConstructionError : public Error {
 public:
  using Error::Error;
};
class DegenerateInstrumentError : public Error {
 public:
  using Error::Error;
};

// Parameter outside the domain where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An observed Bell value above the quantum maximum.
class NonQuantumValueError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The operator inequality could not be satisfied even arbitrarily close to the
// quantum maximum; the extraction channel family is unusable for this angle.
class ChannelFamilyError : public Error {
 public:
  using Error::Error;
};

// The branch-1 operator inequality failed although the branch-0 one held.
class SymmetryViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace diqc
