#pragma once

#include <string>
#include <vector>

namespace aeroseg::data {

// One line per scene: "scene_id <tab> image_path <tab> mask_path <tab> split"
// with split in {train, val, test}. Relative paths resolve against the
// manifest's directory.
struct ManifestEntry {
    std::string scene_id;
    std::string image_path;
    std::string mask_path;
    std::string split;
};

struct Manifest {
    std::vector<ManifestEntry> entries;

    std::vector<ManifestEntry> with_split(const std::string& split) const;
};

Manifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const Manifest& manifest);

} // namespace aeroseg::data
