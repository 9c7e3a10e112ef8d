#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aiaas/metrics/dataset.hpp"

namespace aiaas::metrics {

// Dataset CSV: header "timestamp,<metric>,<metric>,..." then one row per
// frame. UTF-8, '.' decimal separator, '\n' line endings. Numbers are
// written in shortest round-trip form, so export/import is lossless.

/// Throws ParseError (with 1-based line) on ragged rows or non-numeric
/// cells, ValidationError on an empty file or a width that differs from
/// `expected_columns`. Imported rows are tagged Training.
Dataset parse_csv(std::string_view text,
                  const std::optional<std::vector<std::string>>& expected_columns = std::nullopt);
std::string render_csv(const Dataset& dataset);

Dataset import_csv(const std::filesystem::path& path,
                   const std::optional<std::vector<std::string>>& expected_columns = std::nullopt);
void export_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Generic table writer used for plot-data outputs.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows);

}  // namespace aiaas::metrics
