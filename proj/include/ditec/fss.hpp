#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "ditec/classifiers.hpp"
#include "ditec/dataset.hpp"

namespace ditec {

struct FssStep {
    /// Attributes committed in this step, in the order they were chosen.
    /// More than one only when patience let the search cross a plateau.
    std::vector<std::size_t> attributes;
    double accuracy = 0;  ///< cross-validated accuracy with the subset so far
};

struct FssTrace {
    std::vector<FssStep> steps;

    std::vector<std::size_t> selected() const;
    double best_accuracy() const noexcept { return steps.empty() ? 0.0 : steps.back().accuracy; }
};

struct FssOptions {
    int patience = 1;   ///< consecutive non-improving steps tolerated before stopping
    int threads = 1;    ///< candidate evaluations run in parallel
    std::size_t max_attributes = 0;  ///< 0: no limit
    /// Called after every committed step; return false to interrupt the search.
    std::function<bool(const FssStep&)> on_step;
};

/// Greedy forward selection scored by cross_validate. Each round adds the
/// unselected attribute with the highest accuracy (lowest index on ties); a
/// round is committed only if it strictly beats the last committed accuracy.
FssTrace greedy_fss(const Dataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                    const FssOptions& options = {});

/// CSV with header "step,attribute,name,accuracy"; one line per committed attribute.
void write_fss_csv(std::ostream& out, const FssTrace& trace, const Dataset& data);

}  // namespace ditec
