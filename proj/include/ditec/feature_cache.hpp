#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ditec/dataset.hpp"

namespace ditec {

struct CacheRow {
    std::string image;
    std::string content_hash;
    std::vector<double> values;
    std::string label;
};

/// On-disk CSV of descriptors:
///   # ditec-feature-cache v1 config=<16 hex digits>
///   image,content_hash,<attribute names...>,label
///   <one row per image>
struct FeatureCache {
    std::string config_hash;
    std::vector<std::string> attribute_names;
    std::vector<CacheRow> rows;

    static FeatureCache read(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;
    std::string to_string() const;

    /// Classes are the sorted distinct labels.
    Dataset to_dataset() const;
};

}  // namespace ditec
