// src/csv.cpp

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

#include "vibntf/csv.hpp"

#include <fstream>
#include <iomanip>

#include "vibntf/errors.hpp"

namespace vibntf {

namespace {

template <typename Matrix>
void write_grid(const std::string& path, const Matrix& values) {
  std::ofstream os(path);
  if (!os) {
    throw IoError("cannot open for writing: " + path);
  }
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) {
        os << ',';
      }
      os << values(r, c);
    }
    os << '\n';
  }
  if (!os) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace

void write_csv(const std::string& path, const Eigen::MatrixXd& values) {
  write_grid(path, values);
}

void write_csv(const std::string& path, const Eigen::MatrixXi& values) {
  write_grid(path, values);
}

}  // namespace vibntf
