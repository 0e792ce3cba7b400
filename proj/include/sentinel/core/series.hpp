#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sentinel::core {

/// Seconds since the Unix epoch (UTC).
using Timestamp = std::int64_t;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) noexcept { return std::isnan(v); }

/// A string-valued column awaiting label encoding. Empty string = missing.
struct CategoricalColumn {
    std::string name;
    std::vector<std::string> values;
};

/// Timestamped matrix of named numeric features on a uniform grid.
///
/// `values` is n_steps × n_features; missing cells hold NaN (see is_missing).
/// Categorical columns ride along as strings until they are encoded.
class MultivariateSeries {
public:
    MultivariateSeries() = default;

    /// Validates the invariants (uniform strictly increasing timestamps, row
    /// count, target index) and throws StructuralError/ArgumentError.
    MultivariateSeries(std::vector<Timestamp> timestamps, Eigen::MatrixXd values,
                       std::vector<std::string> feature_names, std::size_t target_index,
                       std::int64_t step_seconds, std::vector<CategoricalColumn> categorical = {});

    /// Regular grid starting at `start`, useful for synthetic data.
    static MultivariateSeries from_columns(Eigen::MatrixXd values, std::vector<std::string> feature_names,
                                           std::size_t target_index, std::int64_t step_seconds = 1,
                                           Timestamp start = 0);

    std::size_t n_steps() const noexcept { return timestamps_.size(); }
    std::size_t n_features() const noexcept { return feature_names_.size(); }
    std::size_t target_index() const noexcept { return target_index_; }
    std::int64_t step() const noexcept { return step_; }

    const std::vector<Timestamp>& timestamps() const noexcept { return timestamps_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::vector<CategoricalColumn>& categorical() const noexcept { return categorical_; }

    std::optional<std::size_t> find_feature(const std::string& name) const;
    /// Throws SchemaError if absent.
    std::size_t feature_index(const std::string& name) const;

    Eigen::VectorXd target() const { return values_.col(static_cast<Eigen::Index>(target_index_)); }
    const std::string& target_name() const { return feature_names_[target_index_]; }

    bool has_missing() const;

    /// Rows [begin, end).
    MultivariateSeries slice(std::size_t begin, std::size_t end) const;

    MultivariateSeries with_values(Eigen::MatrixXd values) const;
    MultivariateSeries with_target(Eigen::VectorXd target) const;
    MultivariateSeries with_target_name(const std::string& name) const;
    MultivariateSeries with_feature(const std::string& name, const Eigen::VectorXd& column) const;
    /// Replaces the categorical (string) columns.
    MultivariateSeries with_categorical(std::vector<CategoricalColumn> categorical) const;

    friend bool operator==(const MultivariateSeries& a, const MultivariateSeries& b);

private:
    std::vector<Timestamp> timestamps_;
    Eigen::MatrixXd values_;
    std::vector<std::string> feature_names_;
    std::size_t target_index_ = 0;
    std::int64_t step_ = 1;
    std::vector<CategoricalColumn> categorical_;
};

/// Bitwise equality of two doubles, treating NaN == NaN.
inline bool same_value(double a, double b) noexcept {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

/// Parses "YYYY-MM-DD", "YYYY-MM-DD HH:MM[:SS]" or "YYYY-MM-DDTHH:MM[:SS][Z]".
/// Throws ParseError.
Timestamp parse_iso8601(const std::string& text);
std::string format_iso8601(Timestamp t);

}  // namespace sentinel::core
