/*
 * Copyright 2026 The frechet-forest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRECHET_IO_HPP_
#define FRECHET_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frechet/dataset.hpp"

namespace frechet {

// Fixed 17-significant-digit rendering used by every numeric output.
std::string format_double(double value);

// Numeric CSV; throws DomainError naming the file and 1-based line on a
// malformed field or a ragged row. Blank lines are skipped.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          bool header = false);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path,
                                bool header = false);

std::string to_csv(const Eigen::MatrixXd& m);
std::string objects_to_csv(const MetricSpace& space,
                           const std::vector<MetricObject>& objects);

// Writes through a temporary sibling and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Several files, all renamed only after every one has been written.
void atomic_write_all(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

// X and Y files; Y rows use the per-space serialization. Errors name the
// offending row (1-based).
Dataset load_dataset(const std::filesystem::path& x_path,
                     const std::filesystem::path& y_path, const MetricSpace& space,
                     bool header = false);
void save_dataset(const Dataset& data, const std::filesystem::path& x_path,
                  const std::filesystem::path& y_path);

}  // namespace frechet

#endif  // FRECHET_IO_HPP_
