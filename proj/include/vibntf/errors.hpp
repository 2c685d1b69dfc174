// include/vibntf/errors.hpp

// Copyright 2026  The vibntf authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef VIBNTF_ERRORS_HPP_
#define VIBNTF_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vibntf {

// Anything wrong with what the caller handed us: unreadable files, malformed
// WAV data, mismatched grid shapes, inputs the algorithms cannot act on.
// The CLI maps this family to exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public InputError {
 public:
  explicit IoError(const std::string& what) : InputError(what) {}
};

class FormatError : public InputError {
 public:
  explicit FormatError(const std::string& what) : InputError(what) {}
};

class ShapeError : public InputError {
 public:
  explicit ShapeError(const std::string& what) : InputError(what) {}
};

// Input is syntactically fine but degenerate for the requested operation,
// e.g. normalizing an all-zero spectrogram or mixing a silent source.
class DegenerateInputError : public InputError {
 public:
  explicit DegenerateInputError(const std::string& what) : InputError(what) {}
};

// Numerical breakdown inside an algorithm (rank-deficient projection basis
// and the like).  The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vibntf

#endif  // VIBNTF_ERRORS_HPP_
