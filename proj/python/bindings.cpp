#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "ditec/config.hpp"
#include "ditec/corpus.hpp"
#include "ditec/descriptor.hpp"
#include "ditec/error.hpp"
#include "ditec/evaluation.hpp"
#include "ditec/feature_cache.hpp"
#include "ditec/fss.hpp"
#include "ditec/pipeline.hpp"
#include "ditec/trace.hpp"

namespace py = pybind11;
using namespace ditec;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Grid<double> to_grid(const DoubleArray& a) {
    if (a.ndim() != 2) throw ContractViolation("expected a 2-D array");
    Grid<double> g(a.shape(0), a.shape(1));
    std::memcpy(g.data(), a.data(), g.size() * sizeof(double));
    return g;
}

template <typename T>
py::array_t<T> to_array(const Grid<T>& g) {
    py::array_t<T> out({g.rows(), g.cols()});
    std::memcpy(out.mutable_data(), g.data(), g.size() * sizeof(T));
    return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(v.size());
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

TraceParams make_params(int n_phi, int n_rho, int n_xi, const std::string& functional, double q,
                        double r, const std::string& phi_range, const std::string& rho_range,
                        const std::string& interpolation) {
    TraceParams p;
    p.n_phi = n_phi;
    p.n_rho = n_rho;
    p.n_xi = n_xi;
    p.functional = parse_functional(functional);
    p.q = q;
    p.r = r;
    p.phi_range = parse_phi_range(phi_range);
    p.rho_range = parse_rho_range(rho_range);
    p.interpolation = parse_interpolation(interpolation);
    return p;
}

ImagePlanes to_planes(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& rgb) {
    if (rgb.ndim() != 3 || rgb.shape(2) != 3) throw ContractViolation("expected an H x W x 3 uint8 array");
    return ImagePlanes::from_rgb8({rgb.data(), static_cast<std::size_t>(rgb.size())},
                                  rgb.shape(1), rgb.shape(0));
}

Dataset to_dataset(const DoubleArray& x, const py::array_t<int, py::array::c_style | py::array::forcecast>& y) {
    if (x.ndim() != 2 || y.ndim() != 1 || x.shape(0) != y.shape(0)) {
        throw ContractViolation("expected X of shape (n, d) and y of shape (n,)");
    }
    int classes = 0;
    for (py::ssize_t i = 0; i < y.shape(0); ++i) {
        if (y.at(i) < 0) throw ContractViolation("labels must be non-negative");
        classes = std::max(classes, y.at(i) + 1);
    }
    std::vector<std::string> attrs, names;
    for (py::ssize_t a = 0; a < x.shape(1); ++a) attrs.push_back("a" + std::to_string(a));
    for (int c = 0; c < classes; ++c) names.push_back(std::to_string(c));
    Dataset d(attrs, names);
    for (py::ssize_t i = 0; i < x.shape(0); ++i) {
        d.add({x.data() + i * x.shape(1), static_cast<std::size_t>(x.shape(1))}, y.at(i));
    }
    return d;
}

ClassifierSpec make_spec(const std::string& classifier, double c, int epochs, std::uint64_t seed) {
    ClassifierSpec s;
    s.kind = parse_classifier_kind(classifier);
    s.svm = {c, epochs, seed};
    return s;
}

py::dict metrics_dict(const MetricsReport& r) {
    py::list classes;
    for (const auto& c : r.classes) {
        py::dict d;
        d["name"] = c.name;
        d["precision"] = c.precision;
        d["recall"] = c.recall;
        d["f_measure"] = c.f_measure;
        d["support"] = c.support;
        classes.append(d);
    }
    py::dict out;
    out["classes"] = classes;
    out["accuracy"] = r.accuracy;
    out["mean_precision"] = r.mean_precision;
    out["mean_recall"] = r.mean_recall;
    out["mean_f_measure"] = r.mean_f_measure;
    return out;
}

ConfusionMatrix to_confusion(const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& cm) {
    if (cm.ndim() != 2 || cm.shape(0) != cm.shape(1)) throw ContractViolation("expected a square matrix");
    const auto n = static_cast<std::size_t>(cm.shape(0));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return ConfusionMatrix(names, Grid<std::int64_t>(n, n, std::vector<std::int64_t>(cm.data(), cm.data() + n * n)));
}

}  // namespace

PYBIND11_MODULE(_ditec, m) {
    m.doc() = "Trace-transform image descriptors";
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

    m.def("trace_transform",
          [](const DoubleArray& plane, int n_phi, int n_rho, int n_xi, const std::string& functional,
             double q, double r, const std::string& phi_range, const std::string& rho_range,
             const std::string& interpolation, int threads) {
              const auto g = to_grid(plane);
              const auto p = make_params(n_phi, n_rho, n_xi, functional, q, r, phi_range, rho_range,
                                         interpolation);
              Sinogram s;
              {
                  py::gil_scoped_release release;
                  s = trace_transform(g, p, ChannelId::Y, threads);
              }
              return to_array(s.values);
          },
          py::arg("plane"), py::arg("n_phi") = 71, py::arg("n_rho") = 71, py::arg("n_xi") = 251,
          py::arg("functional") = "if2", py::arg("q") = 2.0, py::arg("r") = 0.5,
          py::arg("phi_range") = "full", py::arg("rho_range") = "symmetric",
          py::arg("interpolation") = "bilinear", py::arg("threads") = 1,
          "Sinogram (n_phi x n_rho) of one intensity plane.");

    m.def("contribution_mask",
          [](std::size_t width, std::size_t height, int n_phi, int n_rho, int n_xi,
             const std::string& phi_range, const std::string& rho_range) {
              const auto p = make_params(n_phi, n_rho, n_xi, "if2", 2, 0.5, phi_range, rho_range,
                                         "bilinear");
              return to_array(contribution_mask(p, width, height).counts);
          },
          py::arg("width"), py::arg("height"), py::arg("n_phi"), py::arg("n_rho"), py::arg("n_xi"),
          py::arg("phi_range") = "full", py::arg("rho_range") = "symmetric",
          "Per-pixel count of line samples (height x width, int64).");

    m.def("mask_metrics",
          [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& counts) {
              if (counts.ndim() != 2) throw ContractViolation("expected a 2-D array");
              const std::size_t h = counts.shape(0), w = counts.shape(1);
              ContributionMask mask{Grid<std::int64_t>(
                  h, w, std::vector<std::int64_t>(counts.data(), counts.data() + h * w))};
              const auto mm = mask_metrics(mask);
              return py::make_tuple(mm.coverage_pct, mm.mean_repetition, mm.variance);
          },
          py::arg("counts"), "(coverage %, mean repetition, variance) of a contribution mask.");

    m.def("dct2", [](const DoubleArray& a) { return to_array(dct2(to_grid(a))); }, py::arg("a"),
          "Orthonormal 2-D DCT-II.");
    m.def("compress_channel", [](const DoubleArray& dct) { return to_array(compress_channel(to_grid(dct))); },
          py::arg("dct"), "Interleaved (mean, kurtosis) per diagonal bin.");
    m.def("mu_kurtosis",
          [](const DoubleArray& v) {
              const auto mk = mu_kurtosis({v.data(), static_cast<std::size_t>(v.size())});
              return py::make_tuple(mk.mu, mk.k);
          },
          py::arg("values"));
    m.def("diagonal_bin_count", &diagonal_bin_count, py::arg("n_phi"), py::arg("n_rho"));
    m.def("full_descriptor_length", &full_descriptor_length, py::arg("n_phi"), py::arg("n_rho"),
          py::arg("n_c") = 3, py::arg("n_f") = 2);
    m.def("reduction_factor", &reduction_factor, py::arg("n_phi"), py::arg("n_rho"), py::arg("n_f"));

    m.def("default_config", [] { return serialize_config(PipelineConfig{}); },
          "The default configuration as key = value text.");

    m.def("read_image",
          [](const std::filesystem::path& path) {
              const auto img = decode_image(path);
              if (!img) throw DataError("cannot decode " + path.string());
              py::array_t<std::uint8_t> out({img->height(), img->width(), std::size_t{3}});
              auto* p = out.mutable_data();
              for (std::size_t r = 0; r < img->height(); ++r) {
                  for (std::size_t c = 0; c < img->width(); ++c) {
                      for (int k = 0; k < 3; ++k) {
                          *p++ = static_cast<std::uint8_t>(std::lround(img->planes[k](r, c) * 255.0));
                      }
                  }
              }
              return out;
          },
          py::arg("path"), "Decode an image file to an H x W x 3 uint8 RGB array.");

    m.def("extract_image",
          [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& rgb,
             const std::string& config, int threads) {
              const auto planes = to_planes(rgb);
              const auto cfg = parse_config(config);
              ImageFeatures f;
              {
                  py::gil_scoped_release release;
                  f = extract_image(planes, cfg, threads);
              }
              py::list sinograms;
              for (const auto& s : f.sinograms) sinograms.append(to_array(s.values));
              py::dict out;
              out["descriptor"] = to_array(f.descriptor.values);
              out["names"] = descriptor_attribute_names(cfg.resolved_keep());
              out["sinograms"] = sinograms;
              return out;
          },
          py::arg("rgb"), py::arg("config") = "", py::arg("threads") = 1,
          "Descriptor, attribute names and Y/Cb/Cr sinograms of an RGB uint8 image.");

    m.def("cross_validate",
          [](const DoubleArray& x, const py::array_t<int, py::array::c_style | py::array::forcecast>& y,
             int folds, std::uint64_t seed, const std::string& classifier, double c, int epochs) {
              const auto d = to_dataset(x, y);
              const auto plan = kfold_plan(d.size(), folds, seed);
              ConfusionMatrix cm;
              {
                  py::gil_scoped_release release;
                  cm = cross_validate(d, plan, make_spec(classifier, c, epochs, seed));
              }
              return to_array(cm.counts());
          },
          py::arg("X"), py::arg("y"), py::arg("folds") = 10, py::arg("seed") = 1,
          py::arg("classifier") = "svm", py::arg("c") = 1.0, py::arg("epochs") = 200,
          "k-fold confusion matrix (rows truth, columns predicted).");

    m.def("greedy_fss",
          [](const DoubleArray& x, const py::array_t<int, py::array::c_style | py::array::forcecast>& y,
             int folds, std::uint64_t seed, const std::string& classifier, int patience, int threads) {
              const auto d = to_dataset(x, y);
              const auto plan = kfold_plan(d.size(), folds, seed);
              FssOptions opts;
              opts.patience = patience;
              opts.threads = threads;
              FssTrace trace;
              {
                  py::gil_scoped_release release;
                  trace = greedy_fss(d, make_spec(classifier, 1.0, 200, seed), plan, opts);
              }
              py::list steps;
              for (const auto& s : trace.steps) steps.append(py::make_tuple(s.attributes, s.accuracy));
              return steps;
          },
          py::arg("X"), py::arg("y"), py::arg("folds") = 10, py::arg("seed") = 1,
          py::arg("classifier") = "svm", py::arg("patience") = 1, py::arg("threads") = 1,
          "Greedy forward selection; list of (attributes added, accuracy) per step.");

    m.def("metrics", [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& cm) {
        return metrics_dict(metrics(to_confusion(cm)));
    }, py::arg("confusion"));

    m.def("misclassification_graph",
          [](const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& cm) {
              py::list edges;
              for (const auto& e : misclassification_graph(to_confusion(cm))) {
                  edges.append(py::make_tuple(e.a, e.b, e.weight));
              }
              return edges;
          },
          py::arg("confusion"), "Undirected edges (i, j, counts[i][j] + counts[j][i]).");

    m.def("ingest",
          [](const std::filesystem::path& root) {
              const auto mf = ingest(root);
              py::list entries;
              for (const auto& e : mf.entries) entries.append(py::make_tuple(e.path, e.label));
              return py::make_tuple(entries, mf.warnings);
          },
          py::arg("root"), "(entries [(path, label)], warnings) for a class-per-directory corpus.");

    m.def("extract_features",
          [](const std::filesystem::path& root, const std::string& config) {
              const auto mf = ingest(root);
              const auto cfg = parse_config(config);
              ExtractSummary s;
              {
                  py::gil_scoped_release release;
                  s = extract_features(mf, cfg);
              }
              py::dict out;
              out["computed"] = s.computed;
              out["reused"] = s.reused;
              out["failed"] = s.failed;
              out["written"] = s.written;
              out["cache"] = cfg.cache_path;
              return out;
          },
          py::arg("root"), py::arg("config") = "", "Build or refresh the feature cache for a corpus.");

    m.def("evaluate",
          [](const std::string& config, const std::filesystem::path& out_dir, bool fss) {
              const auto cfg = parse_config(config);
              const auto cache = FeatureCache::read(cfg.cache_path);
              EvaluationReport r;
              {
                  py::gil_scoped_release release;
                  r = run_evaluation(cache, cfg, out_dir, fss);
              }
              py::dict out = metrics_dict(r.metrics);
              out["confusion"] = to_array(r.confusion.counts());
              out["class_names"] = r.confusion.class_names();
              out["attributes"] = r.attributes;
              return out;
          },
          py::arg("config") = "", py::arg("out_dir") = "", py::arg("fss") = false,
          "Cross-validate the cached descriptors named by the config.");
}
