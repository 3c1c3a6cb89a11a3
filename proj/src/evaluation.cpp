#include "ditec/evaluation.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "ditec/csv.hpp"
#include "ditec/error.hpp"

namespace ditec {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : class_names_(std::move(class_names)),
      counts_(class_names_.size(), class_names_.size(), 0) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names, Grid<std::int64_t> counts)
    : class_names_(std::move(class_names)), counts_(std::move(counts)) {
    require(counts_.rows() == class_names_.size() && counts_.cols() == class_names_.size(),
            "ConfusionMatrix: shape does not match class count");
    for (auto c : counts_.values()) require(c >= 0, "ConfusionMatrix: negative count");
}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t n) {
    require(truth >= 0 && static_cast<std::size_t>(truth) < class_count() && predicted >= 0 &&
                static_cast<std::size_t>(predicted) < class_count(),
            "ConfusionMatrix::add: label out of range");
    counts_(truth, predicted) += n;
}

std::int64_t ConfusionMatrix::total() const noexcept {
    std::int64_t t = 0;
    for (auto c : counts_.values()) t += c;
    return t;
}

std::int64_t ConfusionMatrix::trace() const noexcept {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < class_count(); ++i) t += counts_(i, i);
    return t;
}

double ConfusionMatrix::accuracy() const noexcept {
    const auto t = total();
    return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

MetricsReport metrics(const ConfusionMatrix& cm) {
    MetricsReport report;
    const std::size_t n = cm.class_count();
    for (std::size_t c = 0; c < n; ++c) {
        std::int64_t row = 0, col = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row += cm(c, j);
            col += cm(j, c);
        }
        ClassMetrics m;
        m.name = cm.class_names()[c];
        m.support = row;
        const double tp = static_cast<double>(cm(c, c));
        m.precision = col > 0 ? tp / static_cast<double>(col) : 0.0;
        m.recall = row > 0 ? tp / static_cast<double>(row) : 0.0;
        const double denom = m.precision + m.recall;
        m.f_measure = denom > 0.0 ? 2.0 * m.precision * m.recall / denom : 0.0;
        report.mean_precision += m.precision;
        report.mean_recall += m.recall;
        report.mean_f_measure += m.f_measure;
        report.classes.push_back(std::move(m));
    }
    if (n > 0) {
        report.mean_precision /= static_cast<double>(n);
        report.mean_recall /= static_cast<double>(n);
        report.mean_f_measure /= static_cast<double>(n);
    }
    report.accuracy = cm.accuracy();
    return report;
}

ConfusionMatrix cross_validate(const Dataset& data, const FoldPlan& plan,
                               const ClassifierSpec& spec,
                               std::optional<std::span<const std::size_t>> attributes) {
    require(plan.assignment.size() == data.size(), "cross_validate: fold plan does not match data");
    const Dataset view = attributes ? data.select_attributes(*attributes) : data;
    ConfusionMatrix cm(data.class_names());
    std::vector<double> buf(view.dims());
    for (int fold = 0; fold < plan.k; ++fold) {
        const auto test = plan.test_rows(fold);
        if (test.empty()) continue;
        const auto train_rows = plan.train_rows(fold);
        const auto [scaler, train] = standardize(view.subset_rows(train_rows));
        const Model model = Model::train(spec, train);
        for (std::size_t r : test) {
            scaler.apply(view.row(r), buf);
            cm.add(view.label(r), model.predict(buf));
        }
    }
    return cm;
}

std::vector<GraphEdge> misclassification_graph(const ConfusionMatrix& cm) {
    std::vector<GraphEdge> edges;
    for (std::size_t i = 0; i < cm.class_count(); ++i) {
        for (std::size_t j = i + 1; j < cm.class_count(); ++j) {
            const auto w = cm(i, j) + cm(j, i);
            if (w > 0) edges.push_back({i, j, w});
        }
    }
    return edges;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm) {
    out << "truth\\predicted";
    for (const auto& name : cm.class_names()) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < cm.class_count(); ++i) {
        out << cm.class_names()[i];
        for (std::size_t j = 0; j < cm.class_count(); ++j) out << ',' << cm(i, j);
        out << '\n';
    }
}

ConfusionMatrix read_confusion_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("confusion csv: missing header");
    auto header = csv::split(line);
    if (header.size() < 2 || header[0] != "truth\\predicted") {
        throw DataError("confusion csv: unexpected header");
    }
    std::vector<std::string> names(header.begin() + 1, header.end());
    Grid<std::int64_t> counts(names.size(), names.size(), 0);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!std::getline(in, line)) throw DataError("confusion csv: missing rows");
        auto fields = csv::split(line);
        if (fields.size() != names.size() + 1 || fields[0] != names[i]) {
            throw DataError("confusion csv: malformed row " + std::to_string(i));
        }
        for (std::size_t j = 0; j < names.size(); ++j) {
            const auto& f = fields[j + 1];
            std::int64_t v = 0;
            const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || end != f.data() + f.size() || v < 0) {
                throw DataError("confusion csv: bad count '" + f + "'");
            }
            counts(i, j) = v;
        }
    }
    return ConfusionMatrix(std::move(names), std::move(counts));
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
    out << "class,precision,recall,f_measure,support\n";
    for (const auto& m : report.classes) {
        out << m.name << ',' << csv::format_double(m.precision) << ','
            << csv::format_double(m.recall) << ',' << csv::format_double(m.f_measure) << ','
            << m.support << '\n';
    }
    out << "average," << csv::format_double(report.mean_precision) << ','
        << csv::format_double(report.mean_recall) << ','
        << csv::format_double(report.mean_f_measure) << ",\n";
    out << "accuracy," << csv::format_double(report.accuracy) << ",,,\n";
}

void write_graph_dot(std::ostream& out, const ConfusionMatrix& cm,
                     std::span<const GraphEdge> edges) {
    out << "graph misclassification {\n";
    for (std::size_t i = 0; i < cm.class_count(); ++i) {
        out << "  n" << i << " [label=\"" << cm.class_names()[i] << "\"];\n";
    }
    for (const auto& e : edges) {
        out << "  n" << e.a << " -- n" << e.b << " [weight=" << e.weight << ", label=\""
            << e.weight << "\"];\n";
    }
    out << "}\n";
}

void write_edge_list(std::ostream& out, const ConfusionMatrix& cm,
                     std::span<const GraphEdge> edges) {
    out << "source,target,weight\n";
    for (const auto& e : edges) {
        out << cm.class_names()[e.a] << ',' << cm.class_names()[e.b] << ',' << e.weight << '\n';
    }
}

}  // namespace ditec
