#include "ditec/config.hpp"

#include <fstream>
#include <sstream>

#include "ditec/csv.hpp"
#include "ditec/error.hpp"
#include "ditec/hash.hpp"

namespace ditec {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw DataError("config: '" + key + "' expects an integer, got '" + v + "'");
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        return csv::parse_double(v);
    } catch (const DataError&) {
        throw DataError("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw DataError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::optional<KeepCounts> parse_keep(const std::string& v) {
    if (v == "full") return std::nullopt;
    auto parts = csv::split(v);
    if (parts.size() != 3) throw DataError("config: keep expects 'full' or Y,CB,CR");
    KeepCounts k;
    k.y = static_cast<std::size_t>(parse_int("keep", trim(parts[0])));
    k.cb = static_cast<std::size_t>(parse_int("keep", trim(parts[1])));
    k.cr = static_cast<std::size_t>(parse_int("keep", trim(parts[2])));
    return k;
}

template <class Fn>
auto as_data_error(Fn&& fn) {
    try {
        return fn();
    } catch (const ContractViolation& e) {
        throw DataError(std::string("config: ") + e.what());
    }
}

}  // namespace

KeepCounts PipelineConfig::resolved_keep() const {
    if (keep) return *keep;
    const auto full = 2 * diagonal_bin_count(trace.n_phi, trace.n_rho);
    return {full, full, full};
}

ClassifierSpec PipelineConfig::classifier_spec() const {
    ClassifierSpec spec = classifier;
    spec.svm.seed = seed;
    return spec;
}

std::string PipelineConfig::feature_hash() const {
    const auto k = resolved_keep();
    std::ostringstream os;
    os << trace.n_phi << '|' << trace.n_rho << '|' << trace.n_xi << '|'
       << to_string(trace.phi_range) << '|' << to_string(trace.rho_range) << '|'
       << to_string(trace.functional) << '|' << csv::format_double(trace.q) << '|'
       << csv::format_double(trace.r) << '|' << to_string(trace.interpolation) << '|'
       << kernel_size << '|' << csv::format_double(kernel_sigma) << '|' << k.y << ',' << k.cb
       << ',' << k.cr;
    Fnv1a h;
    h.update(os.str());
    return h.hex();
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (key == "n_phi") c.trace.n_phi = parse_int(key, v);
        else if (key == "n_rho") c.trace.n_rho = parse_int(key, v);
        else if (key == "n_xi") c.trace.n_xi = parse_int(key, v);
        else if (key == "phi_range") c.trace.phi_range = as_data_error([&] { return parse_phi_range(v); });
        else if (key == "rho_range") c.trace.rho_range = as_data_error([&] { return parse_rho_range(v); });
        else if (key == "functional") c.trace.functional = as_data_error([&] { return parse_functional(v); });
        else if (key == "q") c.trace.q = parse_real(key, v);
        else if (key == "r") c.trace.r = parse_real(key, v);
        else if (key == "interpolation") c.trace.interpolation = as_data_error([&] { return parse_interpolation(v); });
        else if (key == "kernel_size") c.kernel_size = parse_int(key, v);
        else if (key == "kernel_sigma") c.kernel_sigma = parse_real(key, v);
        else if (key == "keep") c.keep = parse_keep(v);
        else if (key == "classifier") c.classifier.kind = as_data_error([&] { return parse_classifier_kind(v); });
        else if (key == "svm_c") c.classifier.svm.c = parse_real(key, v);
        else if (key == "svm_epochs") c.classifier.svm.epochs = parse_int(key, v);
        else if (key == "folds") c.folds = parse_int(key, v);
        else if (key == "seed") c.seed = std::stoull(v);
        else if (key == "cache") c.cache_path = v;
        else if (key == "threads") c.threads = parse_int(key, v);
        else if (key == "strict") c.strict = parse_bool(key, v);
        else if (key == "fss_patience") c.fss_patience = parse_int(key, v);
        else throw DataError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const PipelineConfig& c) {
    std::ostringstream os;
    os << "n_phi = " << c.trace.n_phi << '\n'
       << "n_rho = " << c.trace.n_rho << '\n'
       << "n_xi = " << c.trace.n_xi << '\n'
       << "phi_range = " << to_string(c.trace.phi_range) << '\n'
       << "rho_range = " << to_string(c.trace.rho_range) << '\n'
       << "functional = " << to_string(c.trace.functional) << '\n'
       << "q = " << csv::format_double(c.trace.q) << '\n'
       << "r = " << csv::format_double(c.trace.r) << '\n'
       << "interpolation = " << to_string(c.trace.interpolation) << '\n'
       << "kernel_size = " << c.kernel_size << '\n'
       << "kernel_sigma = " << csv::format_double(c.kernel_sigma) << '\n';
    if (c.keep) {
        os << "keep = " << c.keep->y << ',' << c.keep->cb << ',' << c.keep->cr << '\n';
    } else {
        os << "keep = full\n";
    }
    os << "classifier = " << to_string(c.classifier.kind) << '\n'
       << "svm_c = " << csv::format_double(c.classifier.svm.c) << '\n'
       << "svm_epochs = " << c.classifier.svm.epochs << '\n'
       << "folds = " << c.folds << '\n'
       << "seed = " << c.seed << '\n'
       << "cache = " << c.cache_path << '\n'
       << "threads = " << c.threads << '\n'
       << "strict = " << (c.strict ? "true" : "false") << '\n'
       << "fss_patience = " << c.fss_patience << '\n';
    return os.str();
}

}  // namespace ditec
