#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ditec/preproc.hpp"

namespace ditec {

struct ManifestEntry {
    std::string path;
    std::string label;
};

/// Images grouped by class, sorted by (class, filename).
struct CorpusManifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> class_names;  ///< sorted
    std::vector<std::size_t> class_counts;
    std::vector<std::string> warnings;     ///< one per excluded file
};

/// Decodes PNG/JPEG/PPM into normalized RGB planes; nullopt if unreadable.
std::optional<ImagePlanes> decode_image(const std::filesystem::path& path);

/// Reads one class per subdirectory of `root`. Undecodable files are skipped
/// with a warning; an empty corpus throws DataError.
CorpusManifest ingest(const std::filesystem::path& root);

void write_manifest_csv(std::ostream& out, const CorpusManifest& manifest);
CorpusManifest read_manifest_csv(std::istream& in);

}  // namespace ditec
