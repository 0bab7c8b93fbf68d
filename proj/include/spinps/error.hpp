// Copyright 2026 The spinps Authors
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

namespace spinps {

/// Base error. Carries the module that raised it and a short machine code so
/// front ends can emit `E:<module>:<code>:` lines.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string code, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)), code_(std::move(code)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& code() const noexcept { return code_; }

 private:
  std::string module_;
  std::string code_;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  DomainError(std::string module, const std::string& what)
      : Error(std::move(module), "domain", what) {}
};

/// A weight or multiplier would overflow double range.
class ConditioningError : public Error {
 public:
  ConditioningError(std::string module, const std::string& what)
      : Error(std::move(module), "conditioning", what) {}
};

/// A computed result violates an invariant it must satisfy (reality, trace).
class IntegrityError : public Error {
 public:
  IntegrityError(std::string module, const std::string& what)
      : Error(std::move(module), "integrity", what) {}
};

/// Caller violated a structural precondition (non-axial kernel, odd-rank
/// content passed to an inverse that cannot represent it, ...).
class ContractError : public Error {
 public:
  ContractError(std::string module, const std::string& what)
      : Error(std::move(module), "contract", what) {}
};

}  // namespace spinps
