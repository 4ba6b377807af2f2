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

#include "frechet/io.hpp"

#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

namespace frechet {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  return tmp;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing: " +
                             std::strerror(errno));
  }
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          bool header) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const std::string f = trim(field);
      double v = 0.0;
      const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || end != f.data() + f.size()) {
        throw DomainError(path.string() + ":" + std::to_string(line_no) +
                          ": cannot parse '" + f + "' as a number");
      }
      row.push_back(v);
    }
    if (!line.empty() && line.back() == ',') {
      throw DomainError(path.string() + ":" + std::to_string(line_no) +
                        ": empty trailing field");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) +
                        ": expected " + std::to_string(width) + " fields, got " +
                        std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path, bool header) {
  const auto rows = read_csv(path, header);
  if (rows.empty()) throw DomainError(path.string() + ": no data rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::string to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string objects_to_csv(const MetricSpace& space,
                           const std::vector<MetricObject>& objects) {
  std::string out;
  for (const MetricObject& object : objects) {
    const std::vector<double> row = serialize(space, object);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  atomic_write_all({{path, content}});
}

void atomic_write_all(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  try {
    for (const auto& [path, content] : files) {
      if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
      }
      temps.push_back(temp_sibling(path));
      write_file(temps.back(), content);
    }
  } catch (...) {
    std::error_code ignored;
    for (const auto& t : temps) std::filesystem::remove(t, ignored);
    throw;
  }
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::filesystem::rename(temps[k], files[k].first);
  }
}

Dataset load_dataset(const std::filesystem::path& x_path,
                     const std::filesystem::path& y_path, const MetricSpace& space,
                     bool header) {
  Dataset data;
  data.space = space;
  data.x = read_matrix_csv(x_path, header);
  const auto y_rows = read_csv(y_path, header);
  if (y_rows.size() != static_cast<std::size_t>(data.x.rows())) {
    throw DomainError("row-count mismatch: " + x_path.string() + " has " +
                      std::to_string(data.x.rows()) + " rows, " + y_path.string() +
                      " has " + std::to_string(y_rows.size()));
  }
  data.y.reserve(y_rows.size());
  for (std::size_t i = 0; i < y_rows.size(); ++i) {
    try {
      data.y.push_back(make_object(space, y_rows[i]));
    } catch (const DomainError& e) {
      throw DomainError(y_path.string() + ": row " + std::to_string(i + 1) + ": " +
                        e.what());
    }
  }
  if (!data.x.allFinite()) throw DomainError(x_path.string() + ": non-finite value");
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& x_path,
                  const std::filesystem::path& y_path) {
  atomic_write_all({{x_path, to_csv(data.x)},
                    {y_path, objects_to_csv(data.space, data.y)}});
}

}  // namespace frechet
