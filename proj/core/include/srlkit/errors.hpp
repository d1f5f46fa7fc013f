// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace srlkit {

// Base class for every typed error the library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define SRLKIT_ERROR_TYPE(NAME)               \
  class NAME : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  };

// corpus
class UnbalancedBracketError : public Error {
 public:
  UnbalancedBracketError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ColumnCountMismatchError : public Error {
 public:
  ColumnCountMismatchError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

SRLKIT_ERROR_TYPE(EmptySentenceError)
SRLKIT_ERROR_TYPE(OverlappingSpansError)
SRLKIT_ERROR_TYPE(PoolTooSmallError)

// framebank
SRLKIT_ERROR_TYPE(SchemaViolationError)
SRLKIT_ERROR_TYPE(DuplicateSenseIdError)
SRLKIT_ERROR_TYPE(UnknownLemmaError)

// prompting
SRLKIT_ERROR_TYPE(TooManyOptionsError)
SRLKIT_ERROR_TYPE(MissingRolesError)

// extraction
SRLKIT_ERROR_TYPE(NoChoiceFoundError)
SRLKIT_ERROR_TYPE(NoJsonObjectError)
SRLKIT_ERROR_TYPE(EmptyObjectError)

// gateway
class CacheMissError : public Error {
 public:
  explicit CacheMissError(const std::string& key)
      : Error("completion cache miss for key " + key), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

SRLKIT_ERROR_TYPE(RateLimitedError)
SRLKIT_ERROR_TYPE(TransportError)
SRLKIT_ERROR_TYPE(BackendUnavailableError)

// runner
SRLKIT_ERROR_TYPE(ConfigError)

// evaluation
SRLKIT_ERROR_TYPE(DegenerateAgreementError)

#undef SRLKIT_ERROR_TYPE

}  // namespace srlkit
