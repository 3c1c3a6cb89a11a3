#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ditec {

/// Labeled feature vectors stored row-major (one row per instance).
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> attribute_names, std::vector<std::string> class_names);

    void add(std::span<const double> values, int label);

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dims() const noexcept { return attribute_names_.size(); }
    std::size_t class_count() const noexcept { return class_names_.size(); }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * dims(), dims()};
    }
    double value(std::size_t i, std::size_t a) const noexcept { return values_[i * dims() + a]; }
    int label(std::size_t i) const noexcept { return labels_[i]; }

    const std::vector<int>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }

    /// Instances per class, indexed by label.
    std::vector<std::size_t> class_counts() const;

    Dataset subset_rows(std::span<const std::size_t> rows) const;
    Dataset select_attributes(std::span<const std::size_t> attributes) const;

    void set_value(std::size_t i, std::size_t a, double v) noexcept { values_[i * dims() + a] = v; }

private:
    std::vector<std::string> attribute_names_;
    std::vector<std::string> class_names_;
    std::vector<double> values_;
    std::vector<int> labels_;
};

/// Per-attribute z-scoring. Attributes with zero variance pass through unchanged.
class Standardizer {
public:
    static Standardizer fit(const Dataset& train);

    Dataset apply(const Dataset& data) const;
    void apply(std::span<const double> in, std::span<double> out) const;

    const std::vector<double>& mean() const noexcept { return mean_; }
    const std::vector<double>& scale() const noexcept { return scale_; }

private:
    std::vector<double> mean_;
    std::vector<double> scale_;  ///< population std, or 0 for pass-through
};

std::pair<Standardizer, Dataset> standardize(const Dataset& train);

/// Fold index per instance.
struct FoldPlan {
    int k = 10;
    std::uint64_t seed = 0;
    std::vector<int> assignment;

    std::vector<std::size_t> test_rows(int fold) const;
    std::vector<std::size_t> train_rows(int fold) const;
};

/// Seeded shuffle followed by round-robin assignment. Requires 2 ≤ k ≤ n.
FoldPlan kfold_plan(std::size_t n, int k, std::uint64_t seed);

}  // namespace ditec
