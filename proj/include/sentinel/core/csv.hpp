#pragma once

#include "sentinel/core/series.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace sentinel::core {

enum class FeatureType { numeric, categorical, ignore };

struct FeatureSpec {
    std::string name;
    FeatureType type = FeatureType::numeric;
};

/// What to do with a row holding a literal "NA" cell.
enum class NaPolicy { drop_row, as_missing };

struct CsvSchema {
    std::string timestamp_column = "timestamp";
    std::vector<FeatureSpec> features;
    std::string target;
    /// Inferred from the first two rows when absent.
    std::optional<std::int64_t> step_seconds;
    NaPolicy na_policy = NaPolicy::drop_row;
};

/// Reads a UTF-8 CSV with a header row. Blank cells become kMissing, rows
/// containing a literal NA are dropped (see NaPolicy). Throws ParseError
/// (with 1-based line number), SchemaError or StructuralError.
MultivariateSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema);
MultivariateSeries read_csv(std::istream& in, const CsvSchema& schema);

/// Writes timestamp + numeric features (+ categorical columns); missing as blank.
void write_csv(const std::filesystem::path& path, const MultivariateSeries& series,
               const std::string& timestamp_column = "timestamp");

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace sentinel::core
