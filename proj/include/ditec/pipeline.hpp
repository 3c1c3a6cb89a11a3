#pragma once

// End-to-end orchestration: per-image feature extraction, the on-disk
// feature cache, cross-validated evaluation reports, benchmarking and the
// sampling-quality (contribution mask) analysis.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ditec/config.hpp"
#include "ditec/corpus.hpp"
#include "ditec/descriptor.hpp"
#include "ditec/evaluation.hpp"
#include "ditec/fss.hpp"
#include "ditec/feature_cache.hpp"
#include "ditec/trace.hpp"

namespace ditec {

/// Intermediate products of one image, mostly for inspection and tests.
struct ImageFeatures {
    std::array<Sinogram, 3> sinograms;        ///< Y, Cb, Cr
    std::array<Grid<double>, 3> dct;
    std::array<std::vector<double>, 3> compressed;
    HsvStats hsv;
    DescriptorVector descriptor;
};

/// RGB → YCbCr → low-pass → per-channel trace transform → DCT → (μ, k)
/// compression → descriptor with HSV statistics.
ImageFeatures extract_image(const ImagePlanes& rgb, const PipelineConfig& config, int threads = 1);

struct ExtractSummary {
    std::size_t computed = 0;
    std::size_t reused = 0;
    std::size_t failed = 0;
    bool written = false;  ///< false when the cache on disk was already up to date
    std::vector<std::string> warnings;
};

/// Builds or refreshes the feature cache at config.cache_path. Rows are keyed
/// by (image path, content hash); unchanged images are not recomputed and an
/// unchanged cache is not rewritten. A cache built under a different feature
/// configuration throws DataError.
ExtractSummary extract_features(const CorpusManifest& manifest, const PipelineConfig& config);

struct EvaluationReport {
    ConfusionMatrix confusion;
    MetricsReport metrics;
    std::vector<GraphEdge> graph;
    std::optional<FssTrace> fss;
    std::vector<std::size_t> attributes;  ///< attribute subset used for the confusion matrix
};

/// Cross-validates the cached descriptors. With `run_fss`, greedy selection
/// runs first and the confusion matrix is computed on the selected subset.
/// Writes confusion.csv, metrics.csv, graph.dot, graph_edges.csv (and
/// fss.csv) into `out_dir` when it is non-empty.
EvaluationReport run_evaluation(const FeatureCache& cache, const PipelineConfig& config,
                                const std::filesystem::path& out_dir, bool run_fss = false);

struct StageTiming {
    std::string stage;
    double median_ms = 0;
    double min_ms = 0;
    double max_ms = 0;
};

/// Median wall time per stage over `runs` repetitions on `image`.
std::vector<StageTiming> bench_stages(const ImagePlanes& image, const PipelineConfig& config,
                                      int runs = 20);

enum class SweepAxis { NXi, NPhi, NRho, NPhiNRho };

struct SweepPoint {
    int value = 0;
    std::size_t work = 0;  ///< n_phi · n_rho · n_xi
    double median_ms = 0;
};

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Single-channel, single-threaded trace_transform timings while one axis
/// varies (NPhiNRho sets n_phi = n_rho = value).
std::vector<SweepPoint> bench_sweep(const Grid<double>& plane, TraceParams base, SweepAxis axis,
                                    const std::vector<int>& values, int runs = 20);

SweepAxis parse_sweep_axis(const std::string& s);

/// Reference (n_phi, n_rho, n_xi) rows for the mask analysis.
std::vector<std::array<int, 3>> reference_mask_rows();

std::vector<MaskRow> analyze_mask(const std::vector<std::array<int, 3>>& rows, std::size_t width,
                                  std::size_t height, const TraceParams& base = {});

/// Deterministic pseudo-random RGB test image.
ImagePlanes synthetic_image(std::size_t width, std::size_t height, std::uint64_t seed);

}  // namespace ditec
