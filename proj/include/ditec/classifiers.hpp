#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ditec/dataset.hpp"

namespace ditec {

/// Gaussian naive Bayes: per-class, per-attribute normal likelihoods and
/// frequency priors. Prediction is the argmax log-posterior, lowest class
/// index on ties.
class GaussianNaiveBayes {
public:
    static constexpr double kVarianceFloor = 1e-9;

    static GaussianNaiveBayes train(const Dataset& data);

    int predict(std::span<const double> x) const;
    std::vector<double> log_posterior(std::span<const double> x) const;

    const std::vector<double>& means() const noexcept { return mean_; }       ///< class-major
    const std::vector<double>& variances() const noexcept { return var_; }    ///< class-major
    const std::vector<double>& log_priors() const noexcept { return log_prior_; }

private:
    std::size_t classes_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> mean_;
    std::vector<double> var_;
    std::vector<double> log_prior_;
};

struct SvmOptions {
    double c = 1.0;
    int epochs = 200;
    std::uint64_t seed = 0;
};

/// One-vs-rest linear soft-margin machine. Each binary problem minimises
/// λ/2‖w‖² + mean hinge loss with λ = 1/(C·n) by seeded stochastic
/// subgradient steps; the returned weights are the average of the iterates
/// over the second half of training.
class LinearSvm {
public:
    static LinearSvm train(const Dataset& data, const SvmOptions& options = {});

    int predict(std::span<const double> x) const;
    std::vector<double> decision_values(std::span<const double> x) const;

    const std::vector<double>& weights() const noexcept { return weights_; }  ///< class-major
    const std::vector<double>& biases() const noexcept { return biases_; }

private:
    std::size_t classes_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> weights_;
    std::vector<double> biases_;
};

enum class ClassifierKind { NaiveBayes, Svm };

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::Svm;
    SvmOptions svm;

    bool operator==(const ClassifierSpec& o) const {
        return kind == o.kind && svm.c == o.svm.c && svm.epochs == o.svm.epochs &&
               svm.seed == o.svm.seed;
    }
};

std::string to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(const std::string& s);

/// A trained model of either kind; immutable after training.
class Model {
public:
    static Model train(const ClassifierSpec& spec, const Dataset& data);
    int predict(std::span<const double> x) const;

private:
    explicit Model(std::variant<GaussianNaiveBayes, LinearSvm> impl) : impl_(std::move(impl)) {}
    std::variant<GaussianNaiveBayes, LinearSvm> impl_;
};

}  // namespace ditec
