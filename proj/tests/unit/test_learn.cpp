#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ditec/classifiers.hpp"
#include "ditec/dataset.hpp"
#include "ditec/error.hpp"
#include "ditec/evaluation.hpp"
#include "ditec/fss.hpp"

namespace ditec {
namespace {

std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Class c sits 10·(1 + c / dims) units out along axis c mod dims, unit noise.
Dataset blobs(std::size_t classes, std::size_t per_class, std::size_t dims, std::uint64_t seed) {
    Dataset d(names("a", dims), names("c", classes));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t i = 0; i < per_class; ++i) {
        for (std::size_t c = 0; c < classes; ++c) {
            std::vector<double> v(dims);
            for (double& x : v) x = n(rng);
            v[c % dims] += 10.0 * (1 + c / dims);
            d.add(v, static_cast<int>(c));
        }
    }
    return d;
}

Dataset shuffled_labels(std::size_t classes, std::size_t per_class, std::size_t dims,
                        std::uint64_t seed) {
    Dataset d(names("a", dims), names("c", classes));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<int> labels;
    for (std::size_t c = 0; c < classes; ++c) labels.insert(labels.end(), per_class, static_cast<int>(c));
    std::shuffle(labels.begin(), labels.end(), rng);
    for (int label : labels) {
        std::vector<double> v(dims);
        for (double& x : v) x = n(rng);
        d.add(v, label);
    }
    return d;
}

double training_accuracy(const Model& m, const Dataset& d) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.size(); ++i) ok += m.predict(d.row(i)) == d.label(i);
    return static_cast<double>(ok) / d.size();
}

ClassifierSpec gnb() { return {ClassifierKind::NaiveBayes, {}}; }
ClassifierSpec svm(std::uint64_t seed = 0) { return {ClassifierKind::Svm, {1.0, 200, seed}}; }

ConfusionMatrix corel_matrix() {
    const std::vector<std::int64_t> rows = {
        75, 2,  6,  0,  2,   5,  0,  2,  1,  7,  5, 79, 6, 1,  0, 6,  0,  0,  2,  1,
        3,  4,  78, 1,  0,   3,  1,  0,  8,  2,  3, 3,  3, 81, 0, 0,  1,  0,  4,  5,
        0,  0,  0,  0,  100, 0,  0,  0,  0,  0,  7, 1,  3, 0,  0, 83, 0,  2,  3,  1,
        1,  1,  0,  0,  0,   0,  95, 2,  0,  1,  1, 0,  1, 1,  0, 0,  0,  97, 0,  0,
        0,  14, 4,  1,  0,   3,  0,  0,  78, 0,  5, 1,  0, 5,  0, 3,  4,  0,  0,  82};
    return ConfusionMatrix({"Africans", "Beach", "Architecture", "Buses", "Dinosaurs",
                            "Elephants", "Flowers", "Horses", "Mountains", "Food"},
                           Grid<std::int64_t>(10, 10, rows));
}

TEST(Standardize, Examples) {
    Dataset d(names("a", 3), names("c", 1));
    d.add(std::vector<double>{1, 5, 0}, 0);
    d.add(std::vector<double>{3, 5, 1}, 0);
    d.add(std::vector<double>{3, 5, 2}, 0);
    auto [scaler, out] = standardize(d);
    // Column 2 is {0,1,2}: mean 1, population std √(2/3).
    EXPECT_NEAR(out.value(0, 2), -std::sqrt(1.5), 1e-12);
    EXPECT_NEAR(out.value(2, 2), std::sqrt(1.5), 1e-12);
    EXPECT_EQ(out.value(1, 1), 5.0);
    EXPECT_EQ(scaler.scale()[1], 0.0);

    Dataset two(names("a", 1), names("c", 1));
    two.add(std::vector<double>{1}, 0);
    two.add(std::vector<double>{3}, 0);
    auto [s2, o2] = standardize(two);
    EXPECT_DOUBLE_EQ(o2.value(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(o2.value(1, 0), 1.0);
    std::vector<double> held = {5}, res(1);
    s2.apply(held, res);
    EXPECT_DOUBLE_EQ(res[0], 3.0);
}

TEST(Standardize, MomentsOnRandomData) {
    auto d = blobs(3, 20, 4, 7);
    auto [s, out] = standardize(d);
    for (std::size_t a = 0; a < out.dims(); ++a) {
        double m = 0, v = 0;
        for (std::size_t i = 0; i < out.size(); ++i) m += out.value(i, a);
        m /= out.size();
        for (std::size_t i = 0; i < out.size(); ++i) v += std::pow(out.value(i, a) - m, 2);
        EXPECT_NEAR(m, 0.0, 1e-12);
        EXPECT_NEAR(v / out.size(), 1.0, 1e-12);
    }
}

TEST(GaussianNaiveBayes, SeparableOneDimensional) {
    Dataset d({"x"}, {"neg", "pos"});
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        d.add(std::vector<double>{-10 + n(rng)}, 0);
        d.add(std::vector<double>{10 + n(rng)}, 1);
    }
    EXPECT_EQ(training_accuracy(Model::train(gnb(), d), d), 1.0);
}

TEST(GaussianNaiveBayes, SingleClass) {
    Dataset d({"x"}, {"only"});
    d.add(std::vector<double>{1}, 0);
    d.add(std::vector<double>{2}, 0);
    const auto m = GaussianNaiveBayes::train(d);
    for (double x : {-100.0, 0.0, 1.5, 1e6}) EXPECT_EQ(m.predict(std::vector<double>{x}), 0);
}

TEST(GaussianNaiveBayes, EmptyClassRejected) {
    Dataset d({"x"}, {"a", "b"});
    d.add(std::vector<double>{1}, 0);
    EXPECT_THROW(GaussianNaiveBayes::train(d), ContractViolation);
}

TEST(GaussianNaiveBayes, AnalyticBoundary) {
    // Class a: mean 0, variance 1; class b: mean 4, variance 4; equal priors.
    // Posterior equality reduces to 3x² + 8x − (16 + 8 ln 2) = 0.
    Dataset d({"x"}, {"a", "b"});
    for (double x : {-1.0, 1.0}) d.add(std::vector<double>{x}, 0);
    for (double x : {2.0, 6.0}) d.add(std::vector<double>{x}, 1);
    const auto m = GaussianNaiveBayes::train(d);
    const double c = 16 + 8 * std::log(2.0);
    const double root = (-8 + std::sqrt(64 + 12 * c)) / 6;
    const auto lp = m.log_posterior(std::vector<double>{root});
    EXPECT_NEAR(lp[0], lp[1], 1e-6);
    EXPECT_EQ(m.predict(std::vector<double>{root - 1e-4}), 0);
    EXPECT_EQ(m.predict(std::vector<double>{root + 1e-4}), 1);
    EXPECT_NEAR(m.variances()[1], 4.0, 1e-12);
}

TEST(GaussianNaiveBayes, RescalingInvariance) {
    auto d = blobs(3, 15, 3, 11);
    // Mix the classes a little so predictions are not trivially perfect.
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 6.0);
    for (std::size_t i = 0; i < d.size(); ++i) d.set_value(i, 0, d.value(i, 0) + n(rng));
    Dataset scaled = d;
    const std::vector<double> factor = {0.001, 37.0, 2.5};
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t a = 0; a < 3; ++a) scaled.set_value(i, a, d.value(i, a) * factor[a]);
    }
    const auto m1 = GaussianNaiveBayes::train(d), m2 = GaussianNaiveBayes::train(scaled);
    std::uniform_real_distribution<double> u(-10, 30);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> x = {u(rng), u(rng), u(rng)}, y(3);
        for (int a = 0; a < 3; ++a) y[a] = x[a] * factor[a];
        EXPECT_EQ(m1.predict(x), m2.predict(y));
    }
}

TEST(LinearSvm, SeparableTwoDimensional) {
    const auto d = blobs(2, 40, 2, 3);
    EXPECT_EQ(training_accuracy(Model::train(svm(), d), d), 1.0);
}

TEST(LinearSvm, XorIsNotLinearlySeparable) {
    Dataset d({"x", "y"}, {"even", "odd"});
    for (int rep = 0; rep < 5; ++rep) {
        d.add(std::vector<double>{0, 0}, 0);
        d.add(std::vector<double>{1, 1}, 0);
        d.add(std::vector<double>{0, 1}, 1);
        d.add(std::vector<double>{1, 0}, 1);
    }
    EXPECT_LE(training_accuracy(Model::train(svm(), d), d), 0.75);
}

TEST(LinearSvm, TwoPointBoundaryAtOrigin) {
    Dataset d({"x"}, {"a", "b"});
    d.add(std::vector<double>{-1}, 0);
    d.add(std::vector<double>{1}, 1);
    const auto m = LinearSvm::train(d, {1.0, 2000, 0});
    // Class b's machine: w·x + b = 0 at the boundary.
    const double boundary = -m.biases()[1] / m.weights()[1];
    EXPECT_NEAR(boundary, 0.0, 1e-3);
    EXPECT_EQ(m.predict(std::vector<double>{-0.1}), 0);
    EXPECT_EQ(m.predict(std::vector<double>{0.1}), 1);
}

TEST(LinearSvm, NeedsTwoClasses) {
    Dataset d({"x"}, {"a"});
    d.add(std::vector<double>{1}, 0);
    EXPECT_THROW(LinearSvm::train(d), ContractViolation);
}

TEST(LinearSvm, Deterministic) {
    const auto d = shuffled_labels(4, 10, 3, 5);
    const auto a = LinearSvm::train(d, {1.0, 50, 9}), b = LinearSvm::train(d, {1.0, 50, 9});
    EXPECT_EQ(a.weights(), b.weights());
    EXPECT_EQ(a.biases(), b.biases());
}

TEST(KFold, Examples) {
    const auto singletons = kfold_plan(10, 10, 3);
    for (int f = 0; f < 10; ++f) EXPECT_EQ(singletons.test_rows(f).size(), 1u);
    const auto big = kfold_plan(1000, 10, 3);
    for (int f = 0; f < 10; ++f) {
        EXPECT_EQ(big.test_rows(f).size(), 100u);
        EXPECT_EQ(big.train_rows(f).size(), 900u);
    }
    EXPECT_EQ(kfold_plan(1000, 10, 3).assignment, big.assignment);
    EXPECT_NE(kfold_plan(1000, 10, 4).assignment, big.assignment);
    EXPECT_THROW(kfold_plan(5, 6, 0), ContractViolation);
    EXPECT_THROW(kfold_plan(5, 1, 0), ContractViolation);
}

TEST(KFold, PartitionWithBalancedSizes) {
    for (std::size_t n : {7u, 23u, 101u}) {
        const auto plan = kfold_plan(n, 5, n);
        std::vector<int> seen(n, 0);
        std::size_t lo = n, hi = 0;
        for (int f = 0; f < 5; ++f) {
            const auto rows = plan.test_rows(f);
            lo = std::min(lo, rows.size());
            hi = std::max(hi, rows.size());
            for (auto r : rows) ++seen[r];
        }
        EXPECT_LE(hi - lo, 1u);
        EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
    }
}

TEST(CrossValidate, SeparableGivesPerfectAccuracy) {
    const auto d = blobs(4, 20, 4, 8);
    const auto plan = kfold_plan(d.size(), 10, 1);
    for (const auto& spec : {gnb(), svm()}) {
        const auto cm = cross_validate(d, plan, spec);
        EXPECT_EQ(cm.accuracy(), 1.0);
        EXPECT_EQ(cm.total(), 80);
    }
}

TEST(CrossValidate, ShuffledLabelsAreNearChance) {
    double sum = 0;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto d = shuffled_labels(10, 30, 4, seed);
        sum += cross_validate(d, kfold_plan(d.size(), 10, seed), gnb()).accuracy();
    }
    EXPECT_NEAR(sum / 3, 0.1, 0.05);
}

TEST(CrossValidate, RowOrderWithinFoldsDoesNotMatter) {
    const auto d = shuffled_labels(3, 12, 3, 4);
    const auto plan = kfold_plan(d.size(), 4, 6);
    std::vector<std::size_t> perm(d.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(12);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Dataset permuted = d.subset_rows(perm);
    FoldPlan pplan = plan;
    for (std::size_t i = 0; i < perm.size(); ++i) pplan.assignment[i] = plan.assignment[perm[i]];
    for (const auto& spec : {gnb(), svm()}) {
        EXPECT_EQ(cross_validate(d, plan, spec), cross_validate(permuted, pplan, spec));
    }
}

TEST(CrossValidate, AttributeSubset) {
    auto d = blobs(2, 10, 1, 2);
    Dataset wide(names("a", 2), d.class_names());
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t i = 0; i < d.size(); ++i) wide.add(std::vector<double>{n(rng), d.value(i, 0)}, d.label(i));
    const auto plan = kfold_plan(wide.size(), 5, 0);
    const std::vector<std::size_t> useful = {1};
    EXPECT_EQ(cross_validate(wide, plan, gnb(), useful), cross_validate(d, plan, gnb()));
}

TEST(Metrics, CorelConfusionMatrix) {
    const auto cm = corel_matrix();
    const auto r = metrics(cm);
    EXPECT_NEAR(r.accuracy, 0.848, 1e-12);
    const auto& dino = r.classes[4];
    EXPECT_NEAR(dino.precision, 100.0 / 102.0, 1e-12);
    EXPECT_EQ(dino.recall, 1.0);
    EXPECT_NEAR(dino.f_measure, 0.990, 5e-4);
    // Reference per-class values are rounded to three decimals.
    const double precision[] = {0.75, 0.752, 0.772, 0.9, 0.98, 0.806, 0.941, 0.942, 0.813, 0.828};
    const double f[] = {0.75, 0.771, 0.776, 0.853, 0.99, 0.818, 0.945, 0.956, 0.796, 0.824};
    for (int c = 0; c < 10; ++c) {
        EXPECT_NEAR(r.classes[c].precision, precision[c], 5e-4) << c;
        EXPECT_NEAR(r.classes[c].f_measure, f[c], 5e-4) << c;
    }
    EXPECT_NEAR(r.mean_precision, 0.848, 5e-4);
}

TEST(Metrics, IdentityAndNeverPredicted) {
    const auto id = metrics(ConfusionMatrix({"a", "b"}, Grid<std::int64_t>(2, 2, std::vector<std::int64_t>{4, 0, 0, 6})));
    for (const auto& c : id.classes) {
        EXPECT_EQ(c.precision, 1.0);
        EXPECT_EQ(c.recall, 1.0);
        EXPECT_EQ(c.f_measure, 1.0);
    }
    const auto skew = metrics(ConfusionMatrix({"a", "b"}, Grid<std::int64_t>(2, 2, std::vector<std::int64_t>{4, 0, 3, 0})));
    EXPECT_EQ(skew.classes[1].precision, 0.0);
    EXPECT_EQ(skew.classes[1].recall, 0.0);
    EXPECT_EQ(skew.classes[1].f_measure, 0.0);
}

TEST(Metrics, RecallWeightedBySupportEqualsTrace) {
    const auto cm = corel_matrix();
    const auto r = metrics(cm);
    double s = 0;
    for (const auto& c : r.classes) s += c.recall * c.support;
    EXPECT_NEAR(s, static_cast<double>(cm.trace()), 1e-9);
    EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(cm.trace()) / cm.total());
}

TEST(Graph, Examples) {
    EXPECT_TRUE(misclassification_graph(ConfusionMatrix(
                    {"a", "b"}, Grid<std::int64_t>(2, 2, std::vector<std::int64_t>{5, 0, 0, 5})))
                    .empty());
    const auto two = misclassification_graph(
        ConfusionMatrix({"a", "b"}, Grid<std::int64_t>(2, 2, std::vector<std::int64_t>{5, 3, 5, 5})));
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(two[0].weight, 8);

    const auto edges = misclassification_graph(corel_matrix());
    std::int64_t beach_mountains = 0, heaviest_beach = 0;
    for (const auto& e : edges) {
        if (e.a == 1 || e.b == 1) heaviest_beach = std::max(heaviest_beach, e.weight);
        if (e.a == 1 && e.b == 8) beach_mountains = e.weight;
    }
    EXPECT_EQ(beach_mountains, 16);
    EXPECT_EQ(heaviest_beach, 16);
}

TEST(Reports, ConfusionCsvRoundTrip) {
    const auto cm = corel_matrix();
    std::stringstream s;
    write_confusion_csv(s, cm);
    EXPECT_EQ(read_confusion_csv(s), cm);
    std::stringstream bad("nonsense\n");
    EXPECT_THROW(read_confusion_csv(bad), DataError);
}

TEST(Reports, DotAndEdgeList) {
    const ConfusionMatrix cm({"a", "b", "c"}, Grid<std::int64_t>(3, 3, std::vector<std::int64_t>{5, 1, 0, 2, 5, 0, 0, 0, 5}));
    const auto edges = misclassification_graph(cm);
    std::ostringstream dot, list;
    write_graph_dot(dot, cm, edges);
    write_edge_list(list, cm, edges);
    EXPECT_NE(dot.str().find("graph"), std::string::npos);
    EXPECT_NE(dot.str().find("3"), std::string::npos);
    EXPECT_EQ(list.str(), "source,target,weight\na,b,3\n");
}

TEST(GreedyFss, OracleAttributeFirst) {
    Dataset d(names("a", 4), names("c", 3));
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const int label = i % 3;
        d.add(std::vector<double>{n(rng), n(rng), static_cast<double>(label), n(rng)}, label);
    }
    const auto trace = greedy_fss(d, gnb(), kfold_plan(d.size(), 10, 1));
    ASSERT_EQ(trace.steps.size(), 1u);
    EXPECT_EQ(trace.steps[0].attributes, (std::vector<std::size_t>{2}));
    EXPECT_EQ(trace.best_accuracy(), 1.0);
}

TEST(GreedyFss, NoiseNeverLowersAccuracy) {
    const auto d = shuffled_labels(4, 15, 6, 13);
    const auto plan = kfold_plan(d.size(), 5, 2);
    for (int patience : {1, 2, 3}) {
        FssOptions opts;
        opts.patience = patience;
        const auto trace = greedy_fss(d, gnb(), plan, opts);
        for (std::size_t s = 1; s < trace.steps.size(); ++s) {
            EXPECT_GT(trace.steps[s].accuracy, trace.steps[s - 1].accuracy);
        }
        EXPECT_LE(trace.selected().size(), d.dims());
        for (const auto& step : trace.steps) {
            EXPECT_LE(step.attributes.size(), static_cast<std::size_t>(patience));
        }
    }
}

TEST(GreedyFss, ComplementaryPairMatchesExhaustiveSearch) {
    // Class = 2·b0 + b1 for binary b0 (attribute 1) and b1 (attribute 4); the rest is noise.
    const std::size_t dims = 6;
    Dataset d(names("a", dims), names("c", 4));
    std::mt19937_64 rng(21);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 80; ++i) {
        const int b0 = (i / 2) % 2, b1 = i % 2;
        std::vector<double> v(dims);
        for (double& x : v) x = n(rng);
        v[1] = b0;
        v[4] = b1;
        d.add(v, 2 * b0 + b1);
    }
    const auto plan = kfold_plan(d.size(), 10, 5);
    const auto trace = greedy_fss(d, gnb(), plan);
    auto selected = trace.selected();
    ASSERT_EQ(selected.size(), 2u);
    EXPECT_LT(trace.steps[0].accuracy, trace.steps[1].accuracy);
    std::sort(selected.begin(), selected.end());
    EXPECT_EQ(selected, (std::vector<std::size_t>{1, 4}));

    double best_pair = 0;
    for (std::size_t a = 0; a < dims; ++a) {
        for (std::size_t b = a + 1; b < dims; ++b) {
            const std::vector<std::size_t> subset = {a, b};
            best_pair = std::max(best_pair, cross_validate(d, plan, gnb(), subset).accuracy());
        }
    }
    double best_any = 0;
    for (unsigned mask = 1; mask < (1u << dims); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t a = 0; a < dims; ++a) {
            if (mask & (1u << a)) subset.push_back(a);
        }
        best_any = std::max(best_any, cross_validate(d, plan, gnb(), subset).accuracy());
    }
    EXPECT_EQ(trace.best_accuracy(), best_pair);
    EXPECT_EQ(trace.best_accuracy(), best_any);
}

TEST(GreedyFss, ThreadCountDoesNotChangeTrace) {
    const auto d = shuffled_labels(3, 12, 5, 17);
    const auto plan = kfold_plan(d.size(), 4, 1);
    FssOptions one, many;
    one.patience = many.patience = 2;
    many.threads = 4;
    const auto a = greedy_fss(d, svm(), plan, one), b = greedy_fss(d, svm(), plan, many);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
        EXPECT_EQ(a.steps[s].attributes, b.steps[s].attributes);
        EXPECT_EQ(a.steps[s].accuracy, b.steps[s].accuracy);
    }
}

TEST(GreedyFss, CsvLayout) {
    FssTrace trace;
    trace.steps = {{{2}, 0.5}, {{0, 1}, 0.75}};
    Dataset d({"x", "y", "z"}, {"c"});
    std::ostringstream out;
    write_fss_csv(out, trace, d);
    EXPECT_EQ(out.str(), "step,attribute,name,accuracy\n1,2,z,0.5\n2,0,x,0.75\n2,1,y,0.75\n");
}

}  // namespace
}  // namespace ditec
