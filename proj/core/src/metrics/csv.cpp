#include "aiaas/metrics/csv.hpp"

#include <charconv>
#include <cmath>

#include "aiaas/common/error.hpp"
#include "common/json_util.hpp"

namespace aiaas::metrics {

namespace {

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(line, "line " + std::to_string(line) + ": non-numeric cell '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Dataset parse_csv(std::string_view text, const std::optional<std::vector<std::string>>& expected_columns) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError("empty dataset: no header row");

  std::vector<std::string_view> header = split_cells(lines[0]);
  if (trim(header[0]) != "timestamp") throw ParseError(1, "line 1: first column must be 'timestamp'");
  Dataset ds;
  for (std::size_t c = 1; c < header.size(); ++c) ds.columns.emplace_back(trim(header[c]));
  if (ds.columns.empty()) throw ParseError(1, "line 1: no metric columns");
  if (expected_columns && *expected_columns != ds.columns) {
    throw ValidationError("width mismatch: file has " + std::to_string(ds.columns.size()) +
                          " metric columns, catalog expects " + std::to_string(expected_columns->size()));
  }
  if (lines.size() == 1) throw ValidationError("empty dataset: header only");

  const std::size_t width = ds.columns.size();
  std::vector<double> flat;
  flat.reserve((lines.size() - 1) * width);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    std::vector<std::string_view> cells = split_cells(lines[li]);
    if (cells.size() != width + 1) {
      throw ParseError(line_no, "line " + std::to_string(line_no) + ": ragged row with " +
                                    std::to_string(cells.size()) + " cells, expected " +
                                    std::to_string(width + 1));
    }
    ds.timestamps.push_back(parse_number(cells[0], line_no));
    for (std::size_t c = 1; c < cells.size(); ++c) flat.push_back(parse_number(cells[c], line_no));
  }
  ds.values.resize(static_cast<Eigen::Index>(ds.timestamps.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < ds.timestamps.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      ds.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = flat[r * width + c];
    }
  }
  ds.splits.assign(ds.rows(), Split::Training);
  return ds;
}

std::string render_csv(const Dataset& dataset) {
  std::string out = "timestamp";
  for (const std::string& c : dataset.columns) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    out += format_double(dataset.timestamps[r]);
    for (Eigen::Index c = 0; c < dataset.values.cols(); ++c) {
      out += ',';
      out += format_double(dataset.values(static_cast<Eigen::Index>(r), c));
    }
    out += '\n';
  }
  return out;
}

Dataset import_csv(const std::filesystem::path& path, const std::optional<std::vector<std::string>>& expected_columns) {
  return parse_csv(detail::read_text_file(path), expected_columns);
}

void export_csv(const Dataset& dataset, const std::filesystem::path& path) {
  detail::write_text_file(path, render_csv(dataset));
}

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace aiaas::metrics
