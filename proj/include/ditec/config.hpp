#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ditec/classifiers.hpp"
#include "ditec/descriptor.hpp"
#include "ditec/trace.hpp"

namespace ditec {

/// Everything that parameterizes a run. Serialized as "key = value" lines;
/// '#' starts a comment.
struct PipelineConfig {
    TraceParams trace;
    int kernel_size = 3;
    double kernel_sigma = 1.0;
    std::optional<KeepCounts> keep = KeepCounts{};  ///< nullopt keeps every (μ, k) pair
    ClassifierSpec classifier;
    int folds = 10;
    std::uint64_t seed = 1;
    std::string cache_path = "features.csv";
    int threads = 0;  ///< 0: all hardware threads
    bool strict = false;
    int fss_patience = 1;

    /// Per-channel keep counts with "full" resolved against the trace grid.
    KeepCounts resolved_keep() const;

    /// The classifier with its training seed taken from `seed`.
    ClassifierSpec classifier_spec() const;

    /// Hash of the fields that change extracted features (trace, filter, keep).
    std::string feature_hash() const;

    bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);
std::string serialize_config(const PipelineConfig& config);

}  // namespace ditec
