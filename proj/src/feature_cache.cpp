#include "ditec/feature_cache.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ditec/csv.hpp"
#include "ditec/error.hpp"

namespace ditec {

namespace {
constexpr std::string_view kMagic = "# ditec-feature-cache v1 config=";
}

FeatureCache FeatureCache::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature cache: " + path.string());
    FeatureCache cache;
    std::string line;
    if (!std::getline(in, line) || line.rfind(kMagic, 0) != 0) {
        throw DataError("feature cache " + path.string() + ": missing config header");
    }
    cache.config_hash = line.substr(kMagic.size());
    if (!std::getline(in, line)) throw DataError("feature cache: missing column header");
    auto header = csv::split(line);
    if (header.size() < 3 || header[0] != "image" || header[1] != "content_hash" ||
        header.back() != "label") {
        throw DataError("feature cache: malformed column header");
    }
    cache.attribute_names.assign(header.begin() + 2, header.end() - 1);
    const std::size_t d = cache.attribute_names.size();
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = csv::split(line);
        if (f.size() != d + 3) {
            throw DataError("feature cache: wrong field count on line " + std::to_string(lineno));
        }
        CacheRow row{f[0], f[1], {}, f.back()};
        row.values.reserve(d);
        for (std::size_t a = 0; a < d; ++a) row.values.push_back(csv::parse_double(f[a + 2]));
        cache.rows.push_back(std::move(row));
    }
    return cache;
}

std::string FeatureCache::to_string() const {
    std::ostringstream os;
    os << kMagic << config_hash << '\n' << "image,content_hash";
    for (const auto& n : attribute_names) os << ',' << n;
    os << ",label\n";
    for (const auto& r : rows) {
        os << r.image << ',' << r.content_hash;
        for (double v : r.values) os << ',' << csv::format_double(v);
        os << ',' << r.label << '\n';
    }
    return os.str();
}

void FeatureCache::write(const std::filesystem::path& path) const {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write feature cache: " + tmp);
        out << to_string();
        if (!out) throw DataError("failed writing feature cache: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Dataset FeatureCache::to_dataset() const {
    std::set<std::string> labels;
    for (const auto& r : rows) labels.insert(r.label);
    std::vector<std::string> classes(labels.begin(), labels.end());
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = static_cast<int>(i);
    Dataset data(attribute_names, classes);
    for (const auto& r : rows) data.add(r.values, index.at(r.label));
    return data;
}

}  // namespace ditec
