#include "ditec/fss.hpp"

#include <ostream>

#include "ditec/csv.hpp"
#include "ditec/error.hpp"
#include "ditec/evaluation.hpp"
#include "ditec/parallel.hpp"

namespace ditec {

std::vector<std::size_t> FssTrace::selected() const {
    std::vector<std::size_t> out;
    for (const auto& s : steps) out.insert(out.end(), s.attributes.begin(), s.attributes.end());
    return out;
}

FssTrace greedy_fss(const Dataset& data, const ClassifierSpec& spec, const FoldPlan& plan,
                    const FssOptions& options) {
    require(data.dims() >= 1, "greedy_fss: dataset has no attributes");
    require(options.patience >= 1, "greedy_fss: patience must be at least 1");
    const std::size_t d = data.dims();
    const std::size_t limit = options.max_attributes == 0 ? d : std::min(d, options.max_attributes);

    FssTrace trace;
    std::vector<std::size_t> committed;  // accepted subset
    std::vector<std::size_t> working;    // committed + tentative plateau attributes
    std::vector<bool> used(d, false);
    double best = 0.0;
    int stale = 0;

    while (working.size() < limit && best < 1.0) {
        std::vector<std::size_t> candidates;
        for (std::size_t a = 0; a < d; ++a) {
            if (!used[a]) candidates.push_back(a);
        }
        std::vector<double> scores(candidates.size());
        parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
            auto subset = working;
            subset.push_back(candidates[i]);
            scores[i] = cross_validate(data, plan, spec, subset).accuracy();
        });
        std::size_t pick = 0;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            if (scores[i] > scores[pick]) pick = i;
        }
        const std::size_t attr = candidates[pick];
        working.push_back(attr);
        used[attr] = true;

        if (scores[pick] > best) {
            FssStep step{{working.begin() + committed.size(), working.end()}, scores[pick]};
            committed = working;
            best = scores[pick];
            stale = 0;
            trace.steps.push_back(step);
            if (options.on_step && !options.on_step(step)) break;
        } else if (++stale >= options.patience) {
            break;
        }
    }
    return trace;
}

void write_fss_csv(std::ostream& out, const FssTrace& trace, const Dataset& data) {
    out << "step,attribute,name,accuracy\n";
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        for (std::size_t a : trace.steps[s].attributes) {
            out << s + 1 << ',' << a << ',' << data.attribute_names()[a] << ','
                << csv::format_double(trace.steps[s].accuracy) << '\n';
        }
    }
}

}  // namespace ditec
