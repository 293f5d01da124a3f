#include "coatflow/core/manifest.hpp"

#include <set>

#include "json.hpp"

#include "coatflow/core/error.hpp"
#include "coatflow/core/image_io.hpp"

namespace coatflow {

std::filesystem::path DatasetManifest::resolve(const std::string& p) const {
    std::filesystem::path fp(p);
    if (fp.is_absolute() || base_dir.empty()) return fp;
    return base_dir / fp;
}

std::size_t DatasetManifest::count(Label l) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += (e.label == l);
    return n;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::string bytes = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("manifest parse error: " + std::string(e.what()));
    }
    if (!j.is_array()) throw FormatError("manifest must be a JSON array: " + path.string());

    DatasetManifest m;
    m.base_dir = path.parent_path();
    std::set<std::string> seen;
    for (const auto& item : j) {
        if (!item.is_object()) throw FormatError("manifest entry must be an object");
        ManifestEntry e;
        if (!item.contains("path") || !item["path"].is_string())
            throw FormatError("manifest entry missing string 'path'");
        e.path = item["path"].get<std::string>();
        if (!seen.insert(e.path).second)
            throw FormatError("duplicate path in manifest: " + e.path);
        if (!item.contains("label") || !item["label"].is_string())
            throw FormatError("manifest entry missing string 'label'");
        std::string label = item["label"].get<std::string>();
        if (label == "good") {
            e.label = Label::good;
        } else if (label == "bad") {
            e.label = Label::bad;
        } else {
            throw FormatError("unknown label '" + label + "' for " + e.path);
        }
        if (item.contains("mask") && !item["mask"].is_null()) {
            if (!item["mask"].is_string()) throw FormatError("manifest 'mask' must be string or null");
            e.mask_path = item["mask"].get<std::string>();
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : manifest.entries) {
        nlohmann::json item;
        item["path"] = e.path;
        item["label"] = e.label == Label::good ? "good" : "bad";
        if (e.mask_path.empty()) {
            item["mask"] = nullptr;
        } else {
            item["mask"] = e.mask_path;
        }
        j.push_back(item);
    }
    write_file_atomic(path, j.dump(2) + "\n");
}

} // namespace coatflow
