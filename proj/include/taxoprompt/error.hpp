// Copyright 2026 The taxoprompt Authors.
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

#ifndef TAXOPROMPT_ERROR_HPP_
#define TAXOPROMPT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace taxoprompt {

// Base of every error the library throws on bad input. The CLI maps
// UsageError to exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, tables, terms).
class DataError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// The backend lacks a capability the caller asked for, e.g. mask filling
// on a causal model.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Invalid option combination or unknown name supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace taxoprompt

#endif  // TAXOPROMPT_ERROR_HPP_
