#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ditec/classifiers.hpp"
#include "ditec/dataset.hpp"
#include "ditec/grid.hpp"

namespace ditec {

/// Rows are ground truth, columns are predictions.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> class_names);
    ConfusionMatrix(std::vector<std::string> class_names, Grid<std::int64_t> counts);

    void add(int truth, int predicted, std::int64_t n = 1);

    std::size_t class_count() const noexcept { return class_names_.size(); }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    const Grid<std::int64_t>& counts() const noexcept { return counts_; }
    std::int64_t operator()(std::size_t truth, std::size_t predicted) const noexcept {
        return counts_(truth, predicted);
    }

    std::int64_t total() const noexcept;
    std::int64_t trace() const noexcept;
    double accuracy() const noexcept;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::vector<std::string> class_names_;
    Grid<std::int64_t> counts_;
};

struct ClassMetrics {
    std::string name;
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
    std::int64_t support = 0;  ///< row sum
};

struct MetricsReport {
    std::vector<ClassMetrics> classes;
    double accuracy = 0;
    double mean_precision = 0;
    double mean_recall = 0;
    double mean_f_measure = 0;
};

/// Zero denominators yield 0 for the affected metric.
MetricsReport metrics(const ConfusionMatrix& cm);

/// k-fold evaluation: each fold is standardized on its own training rows,
/// fitted, and used to predict its held-out rows. `attributes`, when given,
/// restricts every instance to that attribute subset.
ConfusionMatrix cross_validate(const Dataset& data, const FoldPlan& plan,
                               const ClassifierSpec& spec,
                               std::optional<std::span<const std::size_t>> attributes = {});

struct GraphEdge {
    std::size_t a = 0, b = 0;  ///< a < b
    std::int64_t weight = 0;
};

/// weight(i, j) = counts[i][j] + counts[j][i]; zero-weight pairs omitted.
std::vector<GraphEdge> misclassification_graph(const ConfusionMatrix& cm);

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm);
ConfusionMatrix read_confusion_csv(std::istream& in);
void write_metrics_csv(std::ostream& out, const MetricsReport& report);
void write_graph_dot(std::ostream& out, const ConfusionMatrix& cm,
                     std::span<const GraphEdge> edges);
void write_edge_list(std::ostream& out, const ConfusionMatrix& cm,
                     std::span<const GraphEdge> edges);

}  // namespace ditec
