// include/vibntf/csv.hpp

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

#ifndef VIBNTF_CSV_HPP_
#define VIBNTF_CSV_HPP_

#include <Eigen/Dense>
#include <string>

namespace vibntf {

// Plain numeric grids, one matrix row per line, round-trip precision.
void write_csv(const std::string& path, const Eigen::MatrixXd& values);
void write_csv(const std::string& path, const Eigen::MatrixXi& values);

}  // namespace vibntf

#endif  // VIBNTF_CSV_HPP_
