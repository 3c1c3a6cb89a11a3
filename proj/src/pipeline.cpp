#include "ditec/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "ditec/error.hpp"
#include "ditec/hash.hpp"
#include "ditec/parallel.hpp"

namespace fs = std::filesystem;

namespace ditec {

namespace {

std::string file_hash(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    Fnv1a h;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

template <class Fn>
double time_ms(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ImageFeatures extract_image(const ImagePlanes& rgb, const PipelineConfig& config, int threads) {
    rgb.validate();
    require(rgb.space == ColorSpace::RGB, "extract_image: expects an RGB image");
    const ImagePlanes ycc =
        lowpass(rgb_to_ycbcr(rgb), gaussian_kernel(config.kernel_size, config.kernel_sigma));
    ImageFeatures f;
    f.hsv = hsv_stats(rgb_to_hsv(rgb));
    static constexpr ChannelId kChannels[3] = {ChannelId::Y, ChannelId::Cb, ChannelId::Cr};
    for (int c = 0; c < 3; ++c) {
        f.sinograms[c] = trace_transform(ycc.planes[c], config.trace, kChannels[c], threads);
        f.dct[c] = dct2(f.sinograms[c].values);
        f.compressed[c] = compress_channel(f.dct[c]);
    }
    f.descriptor = assemble_descriptor(f.compressed, f.hsv, config.resolved_keep());
    return f;
}

ExtractSummary extract_features(const CorpusManifest& manifest, const PipelineConfig& config) {
    config.trace.validate();
    const KeepCounts keep = config.resolved_keep();
    // Surface keep/grid mismatches before touching any image.
    {
        const std::size_t full = 2 * diagonal_bin_count(config.trace.n_phi, config.trace.n_rho);
        require(keep.y <= full && keep.cb <= full && keep.cr <= full,
                "keep counts exceed the " + std::to_string(full) + " values per channel");
        require(keep.y % 2 == 0 && keep.cb % 2 == 0 && keep.cr % 2 == 0,
                "keep counts must be even");
    }
    const fs::path cache_path = config.cache_path;
    const std::string config_hash = config.feature_hash();

    FeatureCache previous;
    bool have_previous = false;
    if (fs::exists(cache_path)) {
        previous = FeatureCache::read(cache_path);
        if (previous.config_hash != config_hash) {
            throw DataError("feature cache " + cache_path.string() + " was built with config " +
                            previous.config_hash + " but the current config is " + config_hash +
                            "; delete it or choose another cache path to re-extract");
        }
        have_previous = true;
    }
    std::map<std::pair<std::string, std::string>, const CacheRow*> cached;
    for (const auto& row : previous.rows) cached[{row.image, row.content_hash}] = &row;

    FeatureCache next;
    next.config_hash = config_hash;
    next.attribute_names = descriptor_attribute_names(keep);

    const std::size_t n = manifest.entries.size();
    std::vector<std::optional<CacheRow>> rows(n);
    std::vector<std::string> hashes(n), errors(n);
    std::vector<bool> reused(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = manifest.entries[i];
        try {
            if (e.path.find_first_of(",\n") != std::string::npos) {
                throw DataError("path contains a comma or newline");
            }
            hashes[i] = file_hash(e.path);
        } catch (const std::exception& ex) {
            errors[i] = e.path + ": " + ex.what();
            continue;
        }
        if (auto it = cached.find({e.path, hashes[i]});
            it != cached.end() && it->second->label == e.label) {
            rows[i] = *it->second;
            reused[i] = true;
        }
    }

    parallel_for(n, config.threads, [&](std::size_t i) {
        if (rows[i] || !errors[i].empty()) return;
        const auto& e = manifest.entries[i];
        try {
            auto img = decode_image(e.path);
            if (!img) throw DataError("cannot decode image");
            auto features = extract_image(*img, config, 1);
            rows[i] = CacheRow{e.path, hashes[i], std::move(features.descriptor.values), e.label};
        } catch (const std::exception& ex) {
            errors[i] = e.path + ": " + ex.what();
        }
    });

    ExtractSummary summary;
    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i].empty()) {
            if (config.strict) throw DataError("extraction failed for " + errors[i]);
            summary.warnings.push_back(errors[i]);
            ++summary.failed;
            continue;
        }
        (reused[i] ? summary.reused : summary.computed) += 1;
        next.rows.push_back(std::move(*rows[i]));
    }

    const std::string text = next.to_string();
    if (!have_previous || previous.to_string() != text) {
        if (cache_path.has_parent_path()) fs::create_directories(cache_path.parent_path());
        next.write(cache_path);
        summary.written = true;
    }
    return summary;
}

EvaluationReport run_evaluation(const FeatureCache& cache, const PipelineConfig& config,
                                const fs::path& out_dir, bool run_fss) {
    const Dataset data = cache.to_dataset();
    if (data.class_count() < 2) throw DataError("evaluation needs at least 2 classes");
    if (config.folds < 2 || static_cast<std::size_t>(config.folds) > data.size()) {
        throw DataError("cannot run " + std::to_string(config.folds) + "-fold validation on " +
                        std::to_string(data.size()) + " instances");
    }
    const auto counts = data.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < 2) {
            throw DataError("class '" + data.class_names()[c] + "' has a single instance; " +
                            std::to_string(config.folds) +
                            "-fold validation needs every class to appear in both training "
                            "and test folds. Add images or drop the class.");
        }
    }

    const FoldPlan plan = kfold_plan(data.size(), config.folds, config.seed);
    const ClassifierSpec spec = config.classifier_spec();
    if (spec.kind == ClassifierKind::NaiveBayes) {
        for (int fold = 0; fold < plan.k; ++fold) {
            std::vector<std::size_t> seen(data.class_count(), 0);
            for (std::size_t r : plan.train_rows(fold)) ++seen[data.label(r)];
            for (std::size_t c = 0; c < seen.size(); ++c) {
                if (seen[c] == 0) {
                    throw DataError("class '" + data.class_names()[c] +
                                    "' is missing from the training rows of fold " +
                                    std::to_string(fold) + "; naive Bayes cannot score it. " +
                                    "Use fewer folds or more images per class.");
                }
            }
        }
    }
    EvaluationReport report;
    if (run_fss) {
        FssOptions options;
        options.patience = config.fss_patience;
        options.threads = config.threads;
        report.fss = greedy_fss(data, spec, plan, options);
        report.attributes = report.fss->selected();
    } else {
        report.attributes.resize(data.dims());
        for (std::size_t a = 0; a < data.dims(); ++a) report.attributes[a] = a;
    }
    report.confusion = cross_validate(data, plan, spec, report.attributes);
    report.metrics = metrics(report.confusion);
    report.graph = misclassification_graph(report.confusion);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ostringstream cm, mt, dot, edges;
        write_confusion_csv(cm, report.confusion);
        write_metrics_csv(mt, report.metrics);
        write_graph_dot(dot, report.confusion, report.graph);
        write_edge_list(edges, report.confusion, report.graph);
        write_text(out_dir / "confusion.csv", cm.str());
        write_text(out_dir / "metrics.csv", mt.str());
        write_text(out_dir / "graph.dot", dot.str());
        write_text(out_dir / "graph_edges.csv", edges.str());
        if (report.fss) {
            std::ostringstream fss;
            write_fss_csv(fss, *report.fss, data);
            write_text(out_dir / "fss.csv", fss.str());
        }
    }
    return report;
}

std::vector<StageTiming> bench_stages(const ImagePlanes& image, const PipelineConfig& config,
                                      int runs) {
    require(runs >= 1, "bench: runs must be positive");
    const auto kernel = gaussian_kernel(config.kernel_size, config.kernel_sigma);
    std::vector<double> pre, trace, compress, total;
    for (int i = 0; i < runs; ++i) {
        ImagePlanes ycc;
        HsvStats hsv;
        std::array<Sinogram, 3> sino;
        std::array<std::vector<double>, 3> comp;
        const double t_pre = time_ms([&] {
            ycc = lowpass(rgb_to_ycbcr(image), kernel);
            hsv = hsv_stats(rgb_to_hsv(image));
        });
        const double t_trace = time_ms([&] {
            for (int c = 0; c < 3; ++c) sino[c] = trace_transform(ycc.planes[c], config.trace);
        });
        const double t_comp = time_ms([&] {
            for (int c = 0; c < 3; ++c) comp[c] = compress_channel(dct2(sino[c].values));
            (void)assemble_descriptor(comp, hsv, config.resolved_keep());
        });
        pre.push_back(t_pre);
        trace.push_back(t_trace);
        compress.push_back(t_comp);
        total.push_back(t_pre + t_trace + t_comp);
    }
    auto stat = [](std::string name, const std::vector<double>& v) {
        return StageTiming{std::move(name), median(v), *std::min_element(v.begin(), v.end()),
                           *std::max_element(v.begin(), v.end())};
    };
    return {stat("preprocess", pre), stat("trace", trace), stat("dct+compress", compress),
            stat("total", total)};
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "linear_fit: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0, "linear_fit: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<SweepPoint> bench_sweep(const Grid<double>& plane, TraceParams base, SweepAxis axis,
                                    const std::vector<int>& values, int runs) {
    require(runs >= 1, "bench_sweep: runs must be positive");
    std::vector<TraceParams> params;
    for (int v : values) {
        TraceParams p = base;
        switch (axis) {
            case SweepAxis::NXi: p.n_xi = v; break;
            case SweepAxis::NPhi: p.n_phi = v; break;
            case SweepAxis::NRho: p.n_rho = v; break;
            case SweepAxis::NPhiNRho: p.n_phi = p.n_rho = v; break;
        }
        p.validate();
        (void)trace_transform(plane, p);  // warm-up
        params.push_back(p);
    }
    // Rounds visit every value once, so a burst of background load lands on
    // all points rather than skewing one of them.
    std::vector<std::vector<double>> times(params.size());
    for (int i = 0; i < runs; ++i) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            times[k].push_back(time_ms([&] { (void)trace_transform(plane, params[k]); }));
        }
    }
    std::vector<SweepPoint> out;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const auto& p = params[k];
        out.push_back({values[k],
                       static_cast<std::size_t>(p.n_phi) * static_cast<std::size_t>(p.n_rho) *
                           static_cast<std::size_t>(p.n_xi),
                       median(times[k])});
    }
    return out;
}

SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "nxi") return SweepAxis::NXi;
    if (s == "nphi") return SweepAxis::NPhi;
    if (s == "nrho") return SweepAxis::NRho;
    if (s == "nphi-nrho") return SweepAxis::NPhiNRho;
    throw ContractViolation("unknown sweep axis: " + s + " (nxi, nphi, nrho, nphi-nrho)");
}

std::vector<std::array<int, 3>> reference_mask_rows() {
    return {{64, 64, 15},   {64, 64, 45},    {64, 64, 85},    {64, 64, 185},
            {300, 5, 45},   {300, 5, 151},   {5, 300, 45},    {5, 300, 151},
            {5, 300, 218},  {5, 300, 251},   {384, 256, 15},  {100, 100, 85},
            {100, 100, 185}, {100, 100, 218}, {100, 100, 2185}, {42, 75, 12000}};
}

std::vector<MaskRow> analyze_mask(const std::vector<std::array<int, 3>>& rows, std::size_t width,
                                  std::size_t height, const TraceParams& base) {
    std::vector<MaskRow> out;
    for (const auto& [n_phi, n_rho, n_xi] : rows) {
        TraceParams p = base;
        p.n_phi = n_phi;
        p.n_rho = n_rho;
        p.n_xi = n_xi;
        out.push_back({n_phi, n_rho, n_xi, mask_metrics(contribution_mask(p, width, height))});
    }
    return out;
}

ImagePlanes synthetic_image(std::size_t width, std::size_t height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    ImagePlanes img;
    img.space = ColorSpace::RGB;
    for (auto& p : img.planes) {
        p = Grid<double>(height, width);
        const double fx = 1 + 6 * unit(), fy = 1 + 6 * unit(), phase = 2 * std::numbers::pi * unit();
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                const double s = std::sin(fx * x / width * 2 * std::numbers::pi + phase) *
                                 std::cos(fy * y / height * 2 * std::numbers::pi);
                p(y, x) = std::clamp(0.5 + 0.35 * s + 0.15 * (unit() - 0.5), 0.0, 1.0);
            }
        }
    }
    return img;
}

}  // namespace ditec
