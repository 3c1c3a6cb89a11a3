#include "ditec/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "ditec/error.hpp"
#include "ditec/random.hpp"

namespace ditec {

namespace {

int argmax_lowest(std::span<const double> scores) {
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = static_cast<int>(c);
    }
    return best;
}

// Lexicographic order on (features, label); gives SVM training a canonical
// visiting order independent of how the rows were presented.
std::vector<std::size_t> canonical_order(const Dataset& data) {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = data.row(a), rb = data.row(b);
        const int cmp = std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())
                            ? -1
                            : std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(),
                                                           ra.end());
        if (cmp != 0) return cmp < 0;
        return data.label(a) < data.label(b);
    });
    return order;
}

}  // namespace

GaussianNaiveBayes GaussianNaiveBayes::train(const Dataset& data) {
    const std::size_t classes = data.class_count(), d = data.dims();
    require(classes >= 1, "gnb_train: no classes");
    const auto counts = data.class_counts();
    for (std::size_t c = 0; c < classes; ++c) {
        require(counts[c] > 0, "gnb_train: class '" + data.class_names()[c] + "' has no instances");
    }
    GaussianNaiveBayes m;
    m.classes_ = classes;
    m.dims_ = d;
    m.mean_.assign(classes * d, 0.0);
    m.var_.assign(classes * d, 0.0);
    m.log_prior_.resize(classes);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = static_cast<std::size_t>(data.label(i));
        for (std::size_t a = 0; a < d; ++a) m.mean_[c * d + a] += data.value(i, a);
    }
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t a = 0; a < d; ++a) m.mean_[c * d + a] /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = static_cast<std::size_t>(data.label(i));
        for (std::size_t a = 0; a < d; ++a) {
            const double diff = data.value(i, a) - m.mean_[c * d + a];
            m.var_[c * d + a] += diff * diff;
        }
    }
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t a = 0; a < d; ++a) {
            double& v = m.var_[c * d + a];
            v = std::max(v / static_cast<double>(counts[c]), kVarianceFloor);
        }
        m.log_prior_[c] = std::log(static_cast<double>(counts[c]) / data.size());
    }
    return m;
}

std::vector<double> GaussianNaiveBayes::log_posterior(std::span<const double> x) const {
    require(x.size() == dims_, "gnb_predict: dimensionality mismatch");
    std::vector<double> scores(classes_);
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    for (std::size_t c = 0; c < classes_; ++c) {
        double s = log_prior_[c];
        for (std::size_t a = 0; a < dims_; ++a) {
            const double var = var_[c * dims_ + a];
            const double diff = x[a] - mean_[c * dims_ + a];
            s -= 0.5 * (log_2pi + std::log(var) + diff * diff / var);
        }
        scores[c] = s;
    }
    return scores;
}

int GaussianNaiveBayes::predict(std::span<const double> x) const {
    return argmax_lowest(log_posterior(x));
}

LinearSvm LinearSvm::train(const Dataset& data, const SvmOptions& options) {
    require(data.class_count() >= 2, "svm_train: need at least 2 classes");
    require(data.size() > 0, "svm_train: empty training set");
    require(options.c > 0.0 && options.epochs >= 1, "svm_train: C and epochs must be positive");
    const std::size_t classes = data.class_count(), d = data.dims(), n = data.size();
    LinearSvm m;
    m.classes_ = classes;
    m.dims_ = d;
    m.weights_.assign(classes * d, 0.0);
    m.biases_.assign(classes, 0.0);

    const auto base_order = canonical_order(data);
    const double lambda = 1.0 / (options.c * static_cast<double>(n));
    const std::size_t total_steps = static_cast<std::size_t>(options.epochs) * n;
    const std::size_t average_from = total_steps / 2;

    for (std::size_t cls = 0; cls < classes; ++cls) {
        // Same shuffle stream for every binary problem.
        std::mt19937_64 rng(options.seed);
        std::vector<double> w(d, 0.0), w_avg(d, 0.0);
        double b = 0.0, b_avg = 0.0;
        std::size_t averaged = 0, step = 0;
        auto order = base_order;
        for (int epoch = 0; epoch < options.epochs; ++epoch) {
            shuffle_in_place(order, rng);
            for (std::size_t idx : order) {
                ++step;
                const double eta = 1.0 / (lambda * (static_cast<double>(step) + 1.0 / lambda));
                const auto x = data.row(idx);
                const double y = static_cast<std::size_t>(data.label(idx)) == cls ? 1.0 : -1.0;
                double margin = b;
                for (std::size_t a = 0; a < d; ++a) margin += w[a] * x[a];
                margin *= y;
                const double shrink = 1.0 - eta * lambda;
                for (double& wa : w) wa *= shrink;
                if (margin < 1.0) {
                    for (std::size_t a = 0; a < d; ++a) w[a] += eta * y * x[a];
                    b += eta * y;
                }
                if (step > average_from) {
                    ++averaged;
                    const double mix = 1.0 / static_cast<double>(averaged);
                    for (std::size_t a = 0; a < d; ++a) w_avg[a] += mix * (w[a] - w_avg[a]);
                    b_avg += mix * (b - b_avg);
                }
            }
        }
        std::copy(w_avg.begin(), w_avg.end(), m.weights_.begin() + cls * d);
        m.biases_[cls] = b_avg;
    }
    return m;
}

std::vector<double> LinearSvm::decision_values(std::span<const double> x) const {
    require(x.size() == dims_, "svm_predict: dimensionality mismatch");
    std::vector<double> scores(classes_);
    for (std::size_t c = 0; c < classes_; ++c) {
        double s = biases_[c];
        for (std::size_t a = 0; a < dims_; ++a) s += weights_[c * dims_ + a] * x[a];
        scores[c] = s;
    }
    return scores;
}

int LinearSvm::predict(std::span<const double> x) const {
    return argmax_lowest(decision_values(x));
}

std::string to_string(ClassifierKind kind) {
    return kind == ClassifierKind::Svm ? "svm" : "gnb";
}

ClassifierKind parse_classifier_kind(const std::string& s) {
    if (s == "svm") return ClassifierKind::Svm;
    if (s == "gnb") return ClassifierKind::NaiveBayes;
    throw ContractViolation("unknown classifier: " + s);
}

Model Model::train(const ClassifierSpec& spec, const Dataset& data) {
    if (spec.kind == ClassifierKind::NaiveBayes) return Model(GaussianNaiveBayes::train(data));
    return Model(LinearSvm::train(data, spec.svm));
}

int Model::predict(std::span<const double> x) const {
    return std::visit([&](const auto& m) { return m.predict(x); }, impl_);
}

}  // namespace ditec
