// Command-line front end: ingest, extract, evaluate, fss, mask, bench,
// export-graph and sinogram.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "ditec/config.hpp"
#include "ditec/csv.hpp"
#include "ditec/error.hpp"
#include "ditec/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ditec;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct ConfigFlags {
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> folds, threads, n_phi, n_rho, n_xi, kernel_size, patience, epochs;
    std::optional<std::string> keep, functional, classifier, cache, phi_range, rho_range,
        interpolation;
    std::optional<double> q, r, kernel_sigma, svm_c;
    bool strict = false;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "plain-text key = value config file");
        app->add_option("--seed", seed, "seed for fold assignment and SVM training");
        app->add_option("--folds", folds, "cross-validation folds");
        app->add_option("--threads", threads, "worker threads (0 = all)");
        app->add_option("--keep", keep, "kept values per channel: Y,CB,CR or 'full'");
        app->add_option("--nphi", n_phi, "number of angles");
        app->add_option("--nrho", n_rho, "number of radii");
        app->add_option("--nxi", n_xi, "samples per line");
        app->add_option("--functional", functional, "radon or if2");
        app->add_option("--q", q, "IF2 inner exponent");
        app->add_option("--r", r, "IF2 outer exponent");
        app->add_option("--phi-range", phi_range, "full or half");
        app->add_option("--rho-range", rho_range, "symmetric or positive");
        app->add_option("--interpolation", interpolation, "bilinear or nearest");
        app->add_option("--kernel-size", kernel_size, "low-pass Gaussian kernel side (odd)");
        app->add_option("--kernel-sigma", kernel_sigma, "low-pass Gaussian sigma");
        app->add_option("--classifier", classifier, "svm or gnb");
        app->add_option("--svm-c", svm_c, "SVM regularization constant");
        app->add_option("--svm-epochs", epochs, "SVM training epochs");
        app->add_option("--cache", cache, "feature cache CSV path");
        app->add_option("--patience", patience, "FSS non-improving steps before stopping");
        app->add_flag("--strict", strict, "treat per-image failures as fatal");
    }

    PipelineConfig resolve() const {
        PipelineConfig c = config_file.empty() ? PipelineConfig{} : load_config(config_file);
        std::ostringstream overrides;
        if (seed) overrides << "seed = " << *seed << '\n';
        if (folds) overrides << "folds = " << *folds << '\n';
        if (threads) overrides << "threads = " << *threads << '\n';
        if (keep) overrides << "keep = " << *keep << '\n';
        if (n_phi) overrides << "n_phi = " << *n_phi << '\n';
        if (n_rho) overrides << "n_rho = " << *n_rho << '\n';
        if (n_xi) overrides << "n_xi = " << *n_xi << '\n';
        if (functional) overrides << "functional = " << *functional << '\n';
        if (q) overrides << "q = " << csv::format_double(*q) << '\n';
        if (r) overrides << "r = " << csv::format_double(*r) << '\n';
        if (phi_range) overrides << "phi_range = " << *phi_range << '\n';
        if (rho_range) overrides << "rho_range = " << *rho_range << '\n';
        if (interpolation) overrides << "interpolation = " << *interpolation << '\n';
        if (kernel_size) overrides << "kernel_size = " << *kernel_size << '\n';
        if (kernel_sigma) overrides << "kernel_sigma = " << csv::format_double(*kernel_sigma) << '\n';
        if (classifier) overrides << "classifier = " << *classifier << '\n';
        if (svm_c) overrides << "svm_c = " << csv::format_double(*svm_c) << '\n';
        if (epochs) overrides << "svm_epochs = " << *epochs << '\n';
        if (cache) overrides << "cache = " << *cache << '\n';
        if (patience) overrides << "fss_patience = " << *patience << '\n';
        if (strict) overrides << "strict = true\n";
        // Apply overrides on top of the file by re-parsing the merged text;
        // a failure here can only come from a flag value.
        try {
            return parse_config(serialize_config(c) + overrides.str());
        } catch (const DataError& e) {
            throw ContractViolation(e.what());
        }
    }
};

std::vector<std::array<int, 3>> parse_mask_rows(const std::string& spec) {
    std::vector<std::array<int, 3>> rows;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto f = csv::split(item);
        if (f.size() != 3) throw ContractViolation("mask rows are 'nphi,nrho,nxi;...'");
        rows.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2])});
    }
    return rows;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    for (const auto& f : csv::split(spec)) out.push_back(std::stoi(f));
    return out;
}

CorpusManifest load_manifest(const std::string& corpus, const std::string& manifest) {
    if (!manifest.empty()) {
        std::ifstream in(manifest);
        if (!in) throw DataError("cannot open manifest " + manifest);
        return read_manifest_csv(in);
    }
    if (corpus.empty()) throw ContractViolation("either --corpus or --manifest is required");
    return ingest(corpus);
}

void print_report(const EvaluationReport& report) {
    std::cout << "accuracy " << std::fixed << std::setprecision(4) << report.metrics.accuracy
              << " on " << report.attributes.size() << " attributes\n";
    std::cout << std::left << std::setw(16) << "class" << std::right << std::setw(11)
              << "precision" << std::setw(9) << "recall" << std::setw(11) << "F-measure" << '\n';
    for (const auto& m : report.metrics.classes) {
        std::cout << std::left << std::setw(16) << m.name << std::right << std::setw(11)
                  << m.precision << std::setw(9) << m.recall << std::setw(11) << m.f_measure
                  << '\n';
    }
    std::cout << std::defaultfloat;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-transform image descriptors and domain classification"};
    app.require_subcommand(1);

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "scan a class-per-directory corpus");
    std::string ingest_root, ingest_out;
    ingest_cmd->add_option("root", ingest_root, "corpus root directory")->required();
    ingest_cmd->add_option("--out", ingest_out, "write the manifest CSV here (default stdout)");

    // extract
    auto* extract_cmd = app.add_subcommand("extract", "compute descriptors into the feature cache");
    std::string corpus, manifest_path;
    ConfigFlags extract_flags;
    extract_cmd->add_option("--corpus", corpus, "corpus root directory");
    extract_cmd->add_option("--manifest", manifest_path, "manifest CSV from 'ingest'");
    extract_flags.attach(extract_cmd);

    // evaluate / fss
    auto* eval_cmd = app.add_subcommand("evaluate", "cross-validate cached descriptors");
    auto* fss_cmd = app.add_subcommand("fss", "greedy feature-subset selection, then evaluate");
    std::string eval_out = "report", fss_out = "report";
    ConfigFlags eval_flags, fss_flags;
    eval_cmd->add_option("--out", eval_out, "report directory");
    eval_flags.attach(eval_cmd);
    fss_cmd->add_option("--out", fss_out, "report directory");
    fss_flags.attach(fss_cmd);

    // mask
    auto* mask_cmd = app.add_subcommand("mask", "contribution-mask coverage / repetition table");
    std::size_t mask_w = 384, mask_h = 256;
    std::string mask_rows;
    ConfigFlags mask_flags;
    mask_cmd->add_option("--width", mask_w, "raster width");
    mask_cmd->add_option("--height", mask_h, "raster height");
    mask_cmd->add_option("--rows", mask_rows, "'nphi,nrho,nxi;...' (default: reference rows)");
    mask_flags.attach(mask_cmd);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "time the pipeline stages or sweep one axis");
    std::size_t bench_w = 384, bench_h = 256;
    std::string bench_image, sweep_axis, sweep_values;
    int bench_runs = 20;
    ConfigFlags bench_flags;
    bench_cmd->add_option("--width", bench_w, "synthetic image width");
    bench_cmd->add_option("--height", bench_h, "synthetic image height");
    bench_cmd->add_option("--image", bench_image, "benchmark on this image instead");
    bench_cmd->add_option("--runs", bench_runs, "repetitions per measurement");
    bench_cmd->add_option("--sweep", sweep_axis, "nxi, nphi, nrho or nphi-nrho");
    bench_cmd->add_option("--values", sweep_values, "comma-separated sweep values");
    bench_flags.attach(bench_cmd);

    // export-graph
    auto* graph_cmd = app.add_subcommand("export-graph", "misclassification graph from a confusion CSV");
    std::string graph_in, graph_dot, graph_edges;
    graph_cmd->add_option("confusion", graph_in, "confusion.csv")->required();
    graph_cmd->add_option("--dot", graph_dot, "DOT output (default stdout)");
    graph_cmd->add_option("--edges", graph_edges, "weighted edge list CSV output");

    // sinogram
    auto* sino_cmd = app.add_subcommand("sinogram", "export the Y/Cb/Cr sinograms of one image");
    std::string sino_image, sino_out = ".";
    ConfigFlags sino_flags;
    sino_cmd->add_option("image", sino_image, "input image")->required();
    sino_cmd->add_option("--out", sino_out, "output directory");
    sino_flags.attach(sino_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }

    try {
        if (*ingest_cmd) {
            const auto m = ingest(ingest_root);
            for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
            if (ingest_out.empty()) {
                write_manifest_csv(std::cout, m);
            } else {
                std::ofstream out(ingest_out);
                if (!out) throw DataError("cannot write " + ingest_out);
                write_manifest_csv(out, m);
            }
            std::cerr << m.entries.size() << " images in " << m.class_names.size() << " classes\n";
        } else if (*extract_cmd) {
            const auto config = extract_flags.resolve();
            const auto m = load_manifest(corpus, manifest_path);
            for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
            const auto s = extract_features(m, config);
            for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "computed " << s.computed << ", reused " << s.reused << ", failed "
                      << s.failed << (s.written ? "; cache written to " : "; cache unchanged at ")
                      << config.cache_path << '\n';
        } else if (*eval_cmd || *fss_cmd) {
            const bool fss = fss_cmd->parsed();
            const auto config = (fss ? fss_flags : eval_flags).resolve();
            const auto cache = FeatureCache::read(config.cache_path);
            const auto report = run_evaluation(cache, config, fss ? fss_out : eval_out, fss);
            if (report.fss) {
                std::cout << "FSS selected " << report.fss->selected().size() << " attributes in "
                          << report.fss->steps.size() << " steps\n";
            }
            print_report(report);
        } else if (*mask_cmd) {
            const auto config = mask_flags.resolve();
            const auto rows = analyze_mask(
                mask_rows.empty() ? reference_mask_rows() : parse_mask_rows(mask_rows), mask_w,
                mask_h, config.trace);
            std::cout << format_mask_table(rows);
        } else if (*bench_cmd) {
            const auto config = bench_flags.resolve();
            ImagePlanes image;
            if (!bench_image.empty()) {
                auto decoded = decode_image(bench_image);
                if (!decoded) throw DataError("cannot decode " + bench_image);
                image = std::move(*decoded);
            } else {
                image = synthetic_image(bench_w, bench_h, config.seed);
            }
            if (sweep_axis.empty()) {
                std::cout << "stage,median_ms,min_ms,max_ms\n";
                for (const auto& t : bench_stages(image, config, bench_runs)) {
                    std::cout << t.stage << ',' << t.median_ms << ',' << t.min_ms << ','
                              << t.max_ms << '\n';
                }
            } else {
                const auto axis = parse_sweep_axis(sweep_axis);
                const auto values = sweep_values.empty() ? std::vector<int>{51, 101, 151, 201, 251}
                                                         : parse_int_list(sweep_values);
                const auto ycc = rgb_to_ycbcr(image);
                const auto points =
                    bench_sweep(ycc.planes[0], config.trace, axis, values, bench_runs);
                std::vector<double> x, y;
                std::cout << sweep_axis << ",work,median_ms\n";
                for (const auto& p : points) {
                    std::cout << p.value << ',' << p.work << ',' << p.median_ms << '\n';
                    x.push_back(static_cast<double>(p.work));
                    y.push_back(p.median_ms);
                }
                if (points.size() >= 2) {
                    const auto fit = linear_fit(x, y);
                    std::cout << "# linear fit on work: slope " << fit.slope << " ms/sample, R^2 "
                              << fit.r2 << '\n';
                }
            }
        } else if (*graph_cmd) {
            std::ifstream in(graph_in);
            if (!in) throw DataError("cannot open " + graph_in);
            const auto cm = read_confusion_csv(in);
            const auto edges = misclassification_graph(cm);
            if (graph_dot.empty()) {
                write_graph_dot(std::cout, cm, edges);
            } else {
                std::ofstream out(graph_dot);
                write_graph_dot(out, cm, edges);
            }
            if (!graph_edges.empty()) {
                std::ofstream out(graph_edges);
                write_edge_list(out, cm, edges);
            }
        } else if (*sino_cmd) {
            const auto config = sino_flags.resolve();
            auto img = decode_image(sino_image);
            if (!img) throw DataError("cannot decode " + sino_image);
            const auto features = extract_image(*img, config, config.threads);
            fs::create_directories(sino_out);
            static constexpr const char* kNames[3] = {"Y", "Cb", "Cr"};
            for (int c = 0; c < 3; ++c) {
                std::ofstream csv_out(fs::path(sino_out) / (std::string("sinogram_") + kNames[c] + ".csv"));
                write_sinogram_csv(csv_out, features.sinograms[c]);
                std::ofstream pgm_out(fs::path(sino_out) / (std::string("sinogram_") + kNames[c] + ".pgm"),
                                      std::ios::binary);
                write_sinogram_pgm(pgm_out, features.sinograms[c]);
            }
            std::cout << "wrote 3 sinograms (" << config.trace.n_phi << "x" << config.trace.n_rho
                      << ") to " << sino_out << '\n';
        }
    } catch (const ContractViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return 0;
}
