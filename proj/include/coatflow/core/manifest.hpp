#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace coatflow {

enum class Label { good, bad };

struct ManifestEntry {
    std::string path;       // as stored in the file (may be relative)
    Label label = Label::good;
    std::string mask_path;  // empty = no mask
};

/// Labeled listing of dataset images. Paths are resolved relative to the
/// directory the manifest was loaded from.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::string& p) const;
    std::size_t count(Label l) const;
};

/// Parses a manifest: JSON array of {"path": str, "label": "good"|"bad",
/// "mask": str|null}. Rejects duplicate paths and unknown labels.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

} // namespace coatflow
