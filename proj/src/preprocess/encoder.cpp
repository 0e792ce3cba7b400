#include "sentinel/preprocess/encoder.hpp"

#include "sentinel/error.hpp"

#include <set>

namespace sentinel::preprocess {

EncoderMap fit_encoder(const core::MultivariateSeries& series, const std::vector<std::string>& categorical_features) {
    EncoderMap map;
    for (const auto& name : categorical_features) {
        const core::CategoricalColumn* column = nullptr;
        for (const auto& c : series.categorical())
            if (c.name == name) column = &c;
        if (!column) throw SchemaError("'" + name + "' is not a categorical feature");
        std::set<std::string> categories;
        for (const auto& v : column->values)
            if (!v.empty()) categories.insert(v);
        auto& codes = map.codes[name];
        int next = 0;
        for (const auto& c : categories) codes.emplace(c, next++);
    }
    return map;
}

core::MultivariateSeries apply_encoder(const core::MultivariateSeries& series, const EncoderMap& encoder) {
    core::MultivariateSeries out = series.with_categorical({});
    std::vector<core::CategoricalColumn> remaining;
    for (const auto& column : series.categorical()) {
        const auto it = encoder.codes.find(column.name);
        if (it == encoder.codes.end()) {
            remaining.push_back(column);
            continue;
        }
        Eigen::VectorXd coded(static_cast<Eigen::Index>(column.values.size()));
        for (std::size_t r = 0; r < column.values.size(); ++r) {
            const auto& value = column.values[r];
            if (value.empty()) {
                coded[static_cast<Eigen::Index>(r)] = core::kMissing;
                continue;
            }
            const auto code = it->second.find(value);
            if (code == it->second.end())
                throw EncodingError("feature '" + column.name + "': unseen category '" + value + "'");
            coded[static_cast<Eigen::Index>(r)] = code->second;
        }
        out = out.with_feature(column.name, coded);
    }
    return out.with_categorical(std::move(remaining));
}

}  // namespace sentinel::preprocess
