// Copyright 2026 The longrun Authors.
// SPDX-License-Identifier: Apache-2.0

#include "longrun/markov/csv.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "longrun/error.hpp"

namespace longrun::markov {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(
        fmt::format("CSV cell ({},{}) is not a number: '{}'", row, col, cell));
  }
}

void write_row(std::ostream& out, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << fmt::format("{:.17g}", row(i));
  }
  out << '\n';
}

void write_header(std::ostream& out, const StateSpace& space) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i) out << ',';
    out << space.label(i);
  }
  out << '\n';
}

}  // namespace

void write_kernel_csv(std::ostream& out, const TransitionKernel& kernel) {
  write_header(out, kernel.space());
  for (Eigen::Index x = 0; x < kernel.rows().rows(); ++x)
    write_row(out, kernel.rows().row(x));
}

TransitionKernel read_kernel_csv(std::istream& in, StepLength step) {
  std::string line;
  if (!next_line(in, line)) throw InvalidArgument("kernel CSV is empty");
  StateSpace space(split_line(line));
  const std::size_t n = space.size();
  Eigen::MatrixXd rows(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    if (!next_line(in, line))
      throw DimensionError(fmt::format("kernel CSV has {} rows, expected {}", x, n));
    auto cells = split_line(line);
    if (cells.size() != n)
      throw DimensionError(
          fmt::format("kernel CSV row {} has {} cells, expected {}", x, cells.size(), n));
    for (std::size_t y = 0; y < n; ++y)
      rows(x, y) = parse_number(cells[y], x + 1, y);
  }
  if (next_line(in, line)) throw DimensionError("kernel CSV has extra rows");
  return TransitionKernel(std::move(space), std::move(rows), step);
}

void write_vector_csv(std::ostream& out, const StateSpace& space,
                      const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != space.size())
    throw DimensionError("vector length does not match state space");
  write_header(out, space);
  write_row(out, values.transpose());
}

std::pair<StateSpace, Eigen::VectorXd> read_vector_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw InvalidArgument("vector CSV is empty");
  StateSpace space(split_line(line));
  if (!next_line(in, line)) throw DimensionError("vector CSV has no values row");
  auto cells = split_line(line);
  if (cells.size() != space.size())
    throw DimensionError("vector CSV values row length differs from header");
  Eigen::VectorXd values(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i)
    values(static_cast<Eigen::Index>(i)) = parse_number(cells[i], 1, i);
  return {std::move(space), std::move(values)};
}

LyapunovWeight read_weight_csv(std::istream& in) {
  return LyapunovWeight(read_vector_csv(in).second);
}

}  // namespace longrun::markov
