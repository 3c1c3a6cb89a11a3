#include "ditec/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "ditec/error.hpp"
#include "ditec/random.hpp"

namespace ditec {

Dataset::Dataset(std::vector<std::string> attribute_names, std::vector<std::string> class_names)
    : attribute_names_(std::move(attribute_names)), class_names_(std::move(class_names)) {}

void Dataset::add(std::span<const double> values, int label) {
    require(values.size() == dims(), "Dataset::add: dimensionality mismatch");
    require(label >= 0 && static_cast<std::size_t>(label) < class_names_.size(),
            "Dataset::add: label out of range");
    values_.insert(values_.end(), values.begin(), values.end());
    labels_.push_back(label);
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names_.size(), 0);
    for (int l : labels_) ++counts[l];
    return counts;
}

Dataset Dataset::subset_rows(std::span<const std::size_t> rows) const {
    Dataset out(attribute_names_, class_names_);
    out.values_.reserve(rows.size() * dims());
    for (std::size_t r : rows) out.add(row(r), labels_[r]);
    return out;
}

Dataset Dataset::select_attributes(std::span<const std::size_t> attributes) const {
    std::vector<std::string> names;
    for (std::size_t a : attributes) {
        require(a < dims(), "select_attributes: attribute index out of range");
        names.push_back(attribute_names_[a]);
    }
    Dataset out(std::move(names), class_names_);
    std::vector<double> buf(attributes.size());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < attributes.size(); ++j) buf[j] = value(i, attributes[j]);
        out.add(buf, labels_[i]);
    }
    return out;
}

Standardizer Standardizer::fit(const Dataset& train) {
    require(train.size() > 0, "standardize: empty training set");
    const std::size_t d = train.dims();
    const double n = static_cast<double>(train.size());
    Standardizer s;
    s.mean_.assign(d, 0.0);
    s.scale_.assign(d, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) s.mean_[a] += train.value(i, a);
    }
    for (double& m : s.mean_) m /= n;
    for (std::size_t i = 0; i < train.size(); ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double diff = train.value(i, a) - s.mean_[a];
            s.scale_[a] += diff * diff;
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        const double sd = std::sqrt(s.scale_[a] / n);
        // Relative threshold: roundoff on a constant column is not variance.
        s.scale_[a] = sd > 1e-12 * std::max(1.0, std::abs(s.mean_[a])) ? sd : 0.0;
    }
    return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
    require(in.size() == mean_.size() && out.size() == mean_.size(),
            "Standardizer::apply: dimensionality mismatch");
    for (std::size_t a = 0; a < mean_.size(); ++a) {
        out[a] = scale_[a] > 0.0 ? (in[a] - mean_[a]) / scale_[a] : in[a];
    }
}

Dataset Standardizer::apply(const Dataset& data) const {
    Dataset out(data.attribute_names(), data.class_names());
    std::vector<double> buf(data.dims());
    for (std::size_t i = 0; i < data.size(); ++i) {
        apply(data.row(i), buf);
        out.add(buf, data.label(i));
    }
    return out;
}

std::pair<Standardizer, Dataset> standardize(const Dataset& train) {
    Standardizer s = Standardizer::fit(train);
    Dataset transformed = s.apply(train);
    return {std::move(s), std::move(transformed)};
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) rows.push_back(i);
    }
    return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) rows.push_back(i);
    }
    return rows;
}

FoldPlan kfold_plan(std::size_t n, int k, std::uint64_t seed) {
    require(k >= 2 && static_cast<std::size_t>(k) <= n, "kfold_plan: need 2 <= k <= n");
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(n, 0);
    const auto perm = seeded_permutation(n, seed);
    for (std::size_t i = 0; i < n; ++i) plan.assignment[perm[i]] = static_cast<int>(i % k);
    return plan;
}

}  // namespace ditec
