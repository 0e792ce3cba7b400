#pragma once

#include "sentinel/core/series.hpp"

#include <map>
#include <string>
#include <vector>

namespace sentinel::preprocess {

/// Per categorical feature: category string → integer code. Codes are
/// 0..k−1 in lexicographic (byte) order of the category strings.
struct EncoderMap {
    std::map<std::string, std::map<std::string, int>> codes;
};

/// Throws SchemaError if a named feature is not a categorical column.
EncoderMap fit_encoder(const core::MultivariateSeries& series, const std::vector<std::string>& categorical_features);

/// Moves every encoded categorical column into the numeric matrix (appended
/// after the existing features). Blank categories become missing. Throws
/// EncodingError on a category the map has not seen.
core::MultivariateSeries apply_encoder(const core::MultivariateSeries& series, const EncoderMap& encoder);

}  // namespace sentinel::preprocess
