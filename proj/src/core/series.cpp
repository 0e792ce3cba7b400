#include "sentinel/core/series.hpp"

#include "sentinel/error.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

namespace sentinel::core {

MultivariateSeries::MultivariateSeries(std::vector<Timestamp> timestamps, Eigen::MatrixXd values,
                                       std::vector<std::string> feature_names, std::size_t target_index,
                                       std::int64_t step_seconds, std::vector<CategoricalColumn> categorical)
    : timestamps_(std::move(timestamps)),
      values_(std::move(values)),
      feature_names_(std::move(feature_names)),
      target_index_(target_index),
      step_(step_seconds),
      categorical_(std::move(categorical)) {
    if (step_ <= 0) throw StructuralError("series step must be positive");
    if (static_cast<std::size_t>(values_.rows()) != timestamps_.size())
        throw StructuralError("value row count " + std::to_string(values_.rows()) +
                              " does not match timestamp count " + std::to_string(timestamps_.size()));
    if (static_cast<std::size_t>(values_.cols()) != feature_names_.size())
        throw StructuralError("value column count does not match feature names");
    if (!feature_names_.empty() && target_index_ >= feature_names_.size())
        throw ArgumentError("target index " + std::to_string(target_index_) + " out of range");
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        const auto delta = timestamps_[i] - timestamps_[i - 1];
        if (delta <= 0)
            throw StructuralError("timestamps not strictly increasing at row " + std::to_string(i));
        if (delta != step_)
            throw StructuralError("non-uniform timestamp step at row " + std::to_string(i) + ": " +
                                  std::to_string(delta) + "s, expected " + std::to_string(step_) + "s");
    }
    for (const auto& c : categorical_)
        if (c.values.size() != timestamps_.size())
            throw StructuralError("categorical column '" + c.name + "' has wrong length");
}

MultivariateSeries MultivariateSeries::from_columns(Eigen::MatrixXd values, std::vector<std::string> feature_names,
                                                    std::size_t target_index, std::int64_t step_seconds,
                                                    Timestamp start) {
    std::vector<Timestamp> ts(static_cast<std::size_t>(values.rows()));
    for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = start + static_cast<Timestamp>(i) * step_seconds;
    return MultivariateSeries(std::move(ts), std::move(values), std::move(feature_names), target_index,
                              step_seconds);
}

std::optional<std::size_t> MultivariateSeries::find_feature(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names_.size(); ++i)
        if (feature_names_[i] == name) return i;
    return std::nullopt;
}

std::size_t MultivariateSeries::feature_index(const std::string& name) const {
    if (auto idx = find_feature(name)) return *idx;
    throw SchemaError("missing required feature '" + name + "'");
}

bool MultivariateSeries::has_missing() const { return values_.array().isNaN().any(); }

MultivariateSeries MultivariateSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > n_steps()) throw ArgumentError("slice out of range");
    const auto b = static_cast<Eigen::Index>(begin);
    const auto len = static_cast<Eigen::Index>(end - begin);
    std::vector<CategoricalColumn> cats;
    for (const auto& c : categorical_)
        cats.push_back({c.name, {c.values.begin() + b, c.values.begin() + b + len}});
    return MultivariateSeries({timestamps_.begin() + b, timestamps_.begin() + b + len},
                              values_.middleRows(b, len), feature_names_, target_index_, step_, std::move(cats));
}

MultivariateSeries MultivariateSeries::with_values(Eigen::MatrixXd values) const {
    return MultivariateSeries(timestamps_, std::move(values), feature_names_, target_index_, step_, categorical_);
}

MultivariateSeries MultivariateSeries::with_target(Eigen::VectorXd target) const {
    Eigen::MatrixXd v = values_;
    v.col(static_cast<Eigen::Index>(target_index_)) = target;
    return with_values(std::move(v));
}

MultivariateSeries MultivariateSeries::with_target_name(const std::string& name) const {
    return MultivariateSeries(timestamps_, values_, feature_names_, feature_index(name), step_, categorical_);
}

MultivariateSeries MultivariateSeries::with_feature(const std::string& name, const Eigen::VectorXd& column) const {
    if (column.size() != values_.rows()) throw ArgumentError("feature column length mismatch");
    Eigen::MatrixXd v(values_.rows(), values_.cols() + 1);
    v.leftCols(values_.cols()) = values_;
    v.col(values_.cols()) = column;
    auto names = feature_names_;
    names.push_back(name);
    return MultivariateSeries(timestamps_, std::move(v), std::move(names), target_index_, step_, categorical_);
}

MultivariateSeries MultivariateSeries::with_categorical(std::vector<CategoricalColumn> categorical) const {
    return MultivariateSeries(timestamps_, values_, feature_names_, target_index_, step_, std::move(categorical));
}

bool operator==(const MultivariateSeries& a, const MultivariateSeries& b) {
    if (a.timestamps_ != b.timestamps_ || a.feature_names_ != b.feature_names_ ||
        a.target_index_ != b.target_index_ || a.step_ != b.step_ || a.values_.rows() != b.values_.rows() ||
        a.values_.cols() != b.values_.cols() || a.categorical_.size() != b.categorical_.size())
        return false;
    for (Eigen::Index i = 0; i < a.values_.size(); ++i)
        if (!same_value(a.values_.data()[i], b.values_.data()[i])) return false;
    for (std::size_t i = 0; i < a.categorical_.size(); ++i)
        if (a.categorical_[i].name != b.categorical_[i].name || a.categorical_[i].values != b.categorical_[i].values)
            return false;
    return true;
}

Timestamp parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int consumed = 0;
    const char* p = text.c_str();
    if (std::sscanf(p, "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3)
        throw ParseError("bad timestamp '" + text + "'");
    std::size_t pos = static_cast<std::size_t>(consumed);
    if (pos < text.size()) {
        sep = text[pos];
        if (sep != 'T' && sep != ' ') throw ParseError("bad timestamp '" + text + "'");
        int n = 0;
        if (std::sscanf(p + pos + 1, "%2d:%2d%n", &h, &mi, &n) != 2)
            throw ParseError("bad timestamp '" + text + "'");
        pos += 1 + static_cast<std::size_t>(n);
        if (pos < text.size() && text[pos] == ':') {
            if (std::sscanf(p + pos + 1, "%2d%n", &s, &n) != 1) throw ParseError("bad timestamp '" + text + "'");
            pos += 1 + static_cast<std::size_t>(n);
        }
        if (pos < text.size() && text[pos] == 'Z') ++pos;
        if (pos != text.size()) throw ParseError("bad timestamp '" + text + "'");
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw ParseError("invalid date in timestamp '" + text + "'");
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<Timestamp>(days) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    Timestamp days = t / 86400;
    Timestamp rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                  static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
    return buf;
}

}  // namespace sentinel::core
