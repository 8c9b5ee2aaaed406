// SPDX-License-Identifier: Apache-2.0
//
// risalign - measurement-only phase alignment for RIS energy harvesting
// Copyright (C) 2026 risalign contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace risalign {

/// Two sequences that must have the same length do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A design matrix does not have full column rank.
class SingularDesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The estimated complex direction is zero, so no phase can be extracted.
class AmbiguousPhaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An input lies outside the domain of the quantity being evaluated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Geometry with coincident points.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent or unsupported algorithm settings.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive search would exceed the configured size guard.
class SearchSpaceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace risalign
