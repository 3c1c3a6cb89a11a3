#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ditec/config.hpp"
#include "ditec/corpus.hpp"
#include "ditec/error.hpp"
#include "ditec/feature_cache.hpp"
#include "ditec/pipeline.hpp"

namespace fs = std::filesystem;

namespace ditec {
namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("ditec_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

// Class "dark" images are mostly low intensity; class "warm" mostly red.
void write_ppm(const fs::path& p, std::size_t w, std::size_t h, int style, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> u(0, 60);
    std::ofstream out(p, std::ios::binary);
    out << "P6\n" << w << " " << h << "\n255\n";
    for (std::size_t i = 0; i < w * h; ++i) {
        unsigned char px[3];
        if (style == 0) {
            px[0] = static_cast<unsigned char>(u(rng));
            px[1] = static_cast<unsigned char>(u(rng));
            px[2] = static_cast<unsigned char>(u(rng) + 40);
        } else {
            px[0] = static_cast<unsigned char>(195 + u(rng));
            px[1] = static_cast<unsigned char>(60 + u(rng));
            px[2] = static_cast<unsigned char>(u(rng));
        }
        out.write(reinterpret_cast<const char*>(px), 3);
    }
}

void make_corpus(const fs::path& root, int per_class = 3) {
    int seed = 0;
    for (auto [name, style] : {std::pair{"dark", 0}, {"warm", 1}}) {
        fs::create_directories(root / name);
        for (int i = 0; i < per_class; ++i) {
            write_ppm(root / name / ("img" + std::to_string(i) + ".ppm"), 24, 16, style, ++seed);
        }
    }
}

PipelineConfig small_config(const fs::path& cache) {
    PipelineConfig c;
    c.trace.n_phi = 12;
    c.trace.n_rho = 9;
    c.trace.n_xi = 20;
    c.keep = KeepCounts{8, 4, 4};
    c.folds = 3;
    c.threads = 2;
    c.cache_path = cache.string();
    c.classifier.svm.epochs = 20;
    return c;
}

TEST(Config, RoundTrip) {
    PipelineConfig c;
    c.trace.n_phi = 40;
    c.trace.functional = Functional::Radon;
    c.trace.rho_range = RhoRange::Positive;
    c.trace.q = 1.5;
    c.keep = std::nullopt;
    c.classifier.kind = ClassifierKind::NaiveBayes;
    c.seed = 99;
    c.cache_path = "some/where.csv";
    c.strict = true;
    const auto text = serialize_config(c);
    EXPECT_EQ(parse_config(text), c);
    EXPECT_EQ(serialize_config(parse_config(text)), text);
    EXPECT_EQ(parse_config(serialize_config(PipelineConfig{})), PipelineConfig{});
}

TEST(Config, ParsesCommentsAndRejectsUnknownKeys) {
    const auto c = parse_config("# header\n n_xi = 100  # trailing\nkeep = 10,20,30\n\nseed=4\n");
    EXPECT_EQ(c.trace.n_xi, 100);
    EXPECT_EQ(c.keep, (KeepCounts{10, 20, 30}));
    EXPECT_EQ(c.seed, 4u);
    EXPECT_THROW(parse_config("bogus = 1\n"), DataError);
    EXPECT_THROW(parse_config("n_xi = many\n"), DataError);
}

TEST(Config, FeatureHashTracksFeatureFields) {
    PipelineConfig a, b;
    b.seed = 5;
    b.folds = 4;
    b.classifier.kind = ClassifierKind::NaiveBayes;
    EXPECT_EQ(a.feature_hash(), b.feature_hash());
    b.trace.n_xi = 250;
    EXPECT_NE(a.feature_hash(), b.feature_hash());
    PipelineConfig c;
    c.keep = KeepCounts{104, 60, 58};
    EXPECT_NE(a.feature_hash(), c.feature_hash());
    EXPECT_EQ(a.feature_hash().size(), 16u);
}

TEST(Config, ResolvedKeepForFullDescriptor) {
    PipelineConfig c;
    c.keep = std::nullopt;
    EXPECT_EQ(c.resolved_keep(), (KeepCounts{202, 202, 202}));
    EXPECT_EQ(c.classifier_spec().svm.seed, c.seed);
}

TEST(Corpus, IngestSortsAndCounts) {
    TempDir dir;
    make_corpus(dir.path());
    std::ofstream(dir.path() / "stray.txt") << "not a class";
    const auto m = ingest(dir.path());
    EXPECT_EQ(m.class_names, (std::vector<std::string>{"dark", "warm"}));
    EXPECT_EQ(m.class_counts, (std::vector<std::size_t>{3, 3}));
    ASSERT_EQ(m.entries.size(), 6u);
    EXPECT_EQ(m.entries[0].label, "dark");
    EXPECT_TRUE(m.warnings.empty());
    std::stringstream csv;
    write_manifest_csv(csv, m);
    const auto back = read_manifest_csv(csv);
    ASSERT_EQ(back.entries.size(), 6u);
    EXPECT_EQ(back.entries[5].path, m.entries[5].path);
    EXPECT_EQ(back.class_counts, m.class_counts);
}

TEST(Corpus, CorruptFileIsWarnedAndSkipped) {
    TempDir dir;
    make_corpus(dir.path());
    std::ofstream(dir.path() / "warm" / "broken.png") << "garbage";
    const auto m = ingest(dir.path());
    EXPECT_EQ(m.entries.size(), 6u);
    ASSERT_EQ(m.warnings.size(), 1u);
    EXPECT_NE(m.warnings[0].find("broken.png"), std::string::npos);
}

TEST(Corpus, EmptyCorpusIsDataError) {
    TempDir dir;
    fs::create_directories(dir.path() / "nothing");
    EXPECT_THROW(ingest(dir.path()), DataError);
    EXPECT_THROW(ingest(dir.path() / "missing"), DataError);
}

TEST(Extract, DescriptorShape) {
    PipelineConfig c;
    c.trace.n_phi = 16;
    c.trace.n_rho = 16;
    c.trace.n_xi = 32;
    c.keep = std::nullopt;
    const auto f = extract_image(synthetic_image(40, 30, 3), c);
    EXPECT_EQ(f.sinograms[1].values.rows(), 16u);
    EXPECT_EQ(f.compressed[0].size(), 2 * diagonal_bin_count(16, 16));
    EXPECT_EQ(f.descriptor.values.size(), full_descriptor_length(16, 16));
    c.keep = KeepCounts{6, 4, 2};
    EXPECT_EQ(extract_image(synthetic_image(40, 30, 3), c).descriptor.values.size(), 12u);
}

TEST(Extract, CacheIsIdempotentAndDeterministic) {
    TempDir dir;
    make_corpus(dir.path() / "corpus");
    const auto manifest = ingest(dir.path() / "corpus");
    const auto cache = dir.path() / "features.csv";
    auto config = small_config(cache);

    auto first = extract_features(manifest, config);
    EXPECT_EQ(first.computed, 6u);
    EXPECT_TRUE(first.written);
    const auto bytes = slurp(cache);
    const auto stamp = fs::last_write_time(cache);

    auto second = extract_features(manifest, config);
    EXPECT_EQ(second.computed, 0u);
    EXPECT_EQ(second.reused, 6u);
    EXPECT_FALSE(second.written);
    EXPECT_EQ(slurp(cache), bytes);
    EXPECT_EQ(fs::last_write_time(cache), stamp);

    // A fresh build with another thread count is byte-identical.
    const auto other = dir.path() / "other.csv";
    auto config1 = small_config(other);
    config1.threads = 1;
    extract_features(manifest, config1);
    EXPECT_EQ(slurp(other), bytes);

    const auto read = FeatureCache::read(cache);
    EXPECT_EQ(read.rows.size(), 6u);
    EXPECT_EQ(read.attribute_names.size(), 16u);
    EXPECT_EQ(read.config_hash, config.feature_hash());
    EXPECT_EQ(read.to_string(), bytes);
    EXPECT_EQ(bytes.rfind("# ditec-feature-cache v1 config=", 0), 0u);
}

TEST(Extract, ChangedImageIsRecomputed) {
    TempDir dir;
    make_corpus(dir.path() / "corpus");
    const auto cache = dir.path() / "features.csv";
    const auto config = small_config(cache);
    extract_features(ingest(dir.path() / "corpus"), config);
    write_ppm(dir.path() / "corpus" / "dark" / "img1.ppm", 24, 16, 1, 777);
    const auto s = extract_features(ingest(dir.path() / "corpus"), config);
    EXPECT_EQ(s.computed, 1u);
    EXPECT_EQ(s.reused, 5u);
    EXPECT_TRUE(s.written);
}

TEST(Extract, ConfigMismatchIsDataError) {
    TempDir dir;
    make_corpus(dir.path() / "corpus");
    const auto manifest = ingest(dir.path() / "corpus");
    auto config = small_config(dir.path() / "features.csv");
    extract_features(manifest, config);
    config.trace.n_xi = 21;
    EXPECT_THROW(extract_features(manifest, config), DataError);
}

TEST(Extract, UnreadableImageFailsOnlyInStrictMode) {
    TempDir dir;
    make_corpus(dir.path() / "corpus");
    auto manifest = ingest(dir.path() / "corpus");
    fs::remove(dir.path() / "corpus" / "warm" / "img2.ppm");
    auto config = small_config(dir.path() / "features.csv");
    const auto s = extract_features(manifest, config);
    EXPECT_EQ(s.failed, 1u);
    EXPECT_EQ(s.computed, 5u);
    EXPECT_EQ(FeatureCache::read(config.cache_path).rows.size(), 5u);
    config.strict = true;
    config.cache_path = (dir.path() / "strict.csv").string();
    EXPECT_THROW(extract_features(manifest, config), DataError);
}

TEST(Evaluate, WritesReportsDeterministically) {
    TempDir dir;
    make_corpus(dir.path() / "corpus", 6);
    const auto manifest = ingest(dir.path() / "corpus");
    auto config = small_config(dir.path() / "features.csv");
    extract_features(manifest, config);
    const auto cache = FeatureCache::read(config.cache_path);

    const auto a = run_evaluation(cache, config, dir.path() / "a", true);
    const auto b = run_evaluation(cache, config, dir.path() / "b", true);
    EXPECT_EQ(a.confusion.total(), 12);
    EXPECT_EQ(a.metrics.accuracy, 1.0);
    ASSERT_TRUE(a.fss.has_value());
    for (const char* f : {"confusion.csv", "metrics.csv", "graph.dot", "graph_edges.csv", "fss.csv"}) {
        ASSERT_TRUE(fs::exists(dir.path() / "a" / f)) << f;
        EXPECT_EQ(slurp(dir.path() / "a" / f), slurp(dir.path() / "b" / f)) << f;
    }
    std::ifstream cm(dir.path() / "a" / "confusion.csv");
    EXPECT_EQ(read_confusion_csv(cm), a.confusion);
}

TEST(Evaluate, FatalCases) {
    FeatureCache cache;
    cache.config_hash = "0";
    cache.attribute_names = {"x"};
    for (int i = 0; i < 4; ++i) cache.rows.push_back({"i" + std::to_string(i), "h", {double(i)}, "a"});
    PipelineConfig config;
    config.folds = 2;
    EXPECT_THROW(run_evaluation(cache, config, {}), DataError);  // one class
    cache.rows.push_back({"j", "h", {9.0}, "b"});
    EXPECT_THROW(run_evaluation(cache, config, {}), DataError);  // singleton class
    cache.rows.push_back({"k", "h", {8.0}, "b"});
    EXPECT_NO_THROW(run_evaluation(cache, config, {}));
    config.folds = 7;
    EXPECT_THROW(run_evaluation(cache, config, {}), DataError);  // k > n
}

TEST(Bench, LinearFitAndMaskRows) {
    const auto fit = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_NEAR(fit.slope, 2.0, 1e-12);
    EXPECT_NEAR(fit.intercept, 1.0, 1e-12);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
    EXPECT_EQ(reference_mask_rows().size(), 16u);
    const auto rows = analyze_mask({{5, 3, 9}}, 3, 3);
    ASSERT_EQ(rows.size(), 1u);
    const auto direct = mask_metrics(contribution_mask(
        [] {
            TraceParams p;
            p.n_phi = 5;
            p.n_rho = 3;
            p.n_xi = 9;
            return p;
        }(),
        3, 3));
    EXPECT_EQ(rows[0].metrics.coverage_pct, direct.coverage_pct);
    EXPECT_EQ(rows[0].metrics.mean_repetition, 15.0);
    EXPECT_EQ(parse_sweep_axis("nphi-nrho"), SweepAxis::NPhiNRho);
    EXPECT_THROW(parse_sweep_axis("diagonal"), ContractViolation);
}

#ifdef DITEC_CLI_PATH
int run_cli(const std::string& args) {
    const std::string cmd = std::string(DITEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    make_corpus(dir.path() / "corpus");
    const std::string corpus = (dir.path() / "corpus").string();
    const std::string cache = (dir.path() / "f.csv").string();
    const std::string common = " --nphi 8 --nrho 8 --nxi 10 --keep 4,2,2 --folds 3 --threads 1 --cache " + cache;
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli(""), 1);
    EXPECT_EQ(run_cli("frobnicate"), 1);
    EXPECT_EQ(run_cli("ingest " + corpus), 0);
    EXPECT_EQ(run_cli("ingest " + (dir.path() / "missing").string()), 2);
    EXPECT_EQ(run_cli("extract --corpus " + corpus + " --nphi 3 --cache " + cache), 1);
    EXPECT_EQ(run_cli("extract --corpus " + corpus + common), 0);
    EXPECT_EQ(run_cli("evaluate --out " + (dir.path() / "r").string() + common), 0);
    EXPECT_TRUE(fs::exists(dir.path() / "r" / "confusion.csv"));
    EXPECT_EQ(run_cli("export-graph " + (dir.path() / "r" / "confusion.csv").string()), 0);
    EXPECT_EQ(run_cli("export-graph " + (dir.path() / "nope.csv").string()), 2);
    EXPECT_EQ(run_cli("evaluate --cache " + (dir.path() / "absent.csv").string()), 2);
    EXPECT_EQ(run_cli("mask --rows 8,8,10 --width 16 --height 12"), 0);
    EXPECT_EQ(run_cli("extract --corpus " + corpus + " --keep 3,2,2 --cache " + cache), 1);
}
#endif

}  // namespace
}  // namespace ditec
