#include "ditec/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <opencv2/imgcodecs.hpp>
#include <ostream>

#include "ditec/csv.hpp"
#include "ditec/error.hpp"

namespace fs = std::filesystem;

namespace ditec {

namespace {

bool has_image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".ppm" || ext == ".pnm";
}

void finish_counts(CorpusManifest& m) {
    std::map<std::string, std::size_t> counts;
    for (const auto& e : m.entries) ++counts[e.label];
    m.class_names.clear();
    m.class_counts.clear();
    for (const auto& [name, n] : counts) {
        m.class_names.push_back(name);
        m.class_counts.push_back(n);
    }
}

}  // namespace

std::optional<ImagePlanes> decode_image(const fs::path& path) {
    cv::Mat bgr;
    try {
        bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    } catch (const cv::Exception&) {
        return std::nullopt;
    }
    if (bgr.empty() || bgr.type() != CV_8UC3) return std::nullopt;
    ImagePlanes img;
    img.space = ColorSpace::RGB;
    const auto h = static_cast<std::size_t>(bgr.rows), w = static_cast<std::size_t>(bgr.cols);
    for (auto& p : img.planes) p = Grid<double>(h, w);
    for (std::size_t y = 0; y < h; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(static_cast<int>(y));
        for (std::size_t x = 0; x < w; ++x) {
            img.planes[0](y, x) = row[x][2] / 255.0;
            img.planes[1](y, x) = row[x][1] / 255.0;
            img.planes[2](y, x) = row[x][0] / 255.0;
        }
    }
    return img;
}

CorpusManifest ingest(const fs::path& root) {
    if (!fs::is_directory(root)) throw DataError("corpus root is not a directory: " + root.string());
    std::vector<fs::path> classes;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) classes.push_back(entry.path());
    }
    std::sort(classes.begin(), classes.end());

    CorpusManifest m;
    for (const auto& dir : classes) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && has_image_extension(entry.path())) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
            return a.filename() < b.filename();
        });
        std::size_t accepted = 0;
        for (const auto& f : files) {
            if (!decode_image(f)) {
                m.warnings.push_back("cannot decode " + f.string() + "; excluded");
                continue;
            }
            m.entries.push_back({f.string(), dir.filename().string()});
            ++accepted;
        }
        if (accepted == 0) {
            m.warnings.push_back("class directory " + dir.string() + " has no decodable images");
        }
    }
    if (m.entries.empty()) throw DataError("empty corpus: no decodable images under " + root.string());
    finish_counts(m);
    return m;
}

void write_manifest_csv(std::ostream& out, const CorpusManifest& manifest) {
    out << "path,label\n";
    for (const auto& e : manifest.entries) out << e.path << ',' << e.label << '\n';
}

CorpusManifest read_manifest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || csv::split(line) != std::vector<std::string>{"path", "label"}) {
        throw DataError("manifest: expected header 'path,label'");
    }
    CorpusManifest m;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = csv::split(line);
        if (f.size() != 2) throw DataError("manifest: malformed line '" + line + "'");
        if (!fs::exists(f[0])) throw DataError("manifest: missing file " + f[0]);
        m.entries.push_back({f[0], f[1]});
    }
    if (m.entries.empty()) throw DataError("manifest: no entries");
    finish_counts(m);
    return m;
}

}  // namespace ditec
