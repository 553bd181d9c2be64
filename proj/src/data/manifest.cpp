#include "aeroseg/data/manifest.hpp"

#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "aeroseg/util/config.hpp"

namespace aeroseg::data {

std::vector<ManifestEntry> Manifest::with_split(const std::string& split) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
        if (e.split == split) out.push_back(e);
    return out;
}

Manifest load_manifest(const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path base = fs::path(path).parent_path();
    std::istringstream in(read_text_file(path));
    Manifest m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        ManifestEntry e;
        std::size_t a = line.find('\t');
        std::size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
        std::size_t c = b == std::string::npos ? b : line.find('\t', b + 1);
        if (c == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 4 tab-separated fields");
        e.scene_id = line.substr(0, a);
        e.image_path = line.substr(a + 1, b - a - 1);
        e.mask_path = line.substr(b + 1, c - b - 1);
        e.split = line.substr(c + 1);
        if (e.split != "train" && e.split != "val" && e.split != "test")
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad split '" + e.split +
                                     "'");
        auto resolve = [&base](std::string& p) {
            if (!p.empty() && !fs::path(p).is_absolute()) p = (base / p).string();
        };
        resolve(e.image_path);
        resolve(e.mask_path);
        m.entries.push_back(e);
    }
    return m;
}

void save_manifest(const std::string& path, const Manifest& manifest) {
    namespace fs = std::filesystem;
    const fs::path base = fs::path(path).parent_path();
    std::string out;
    for (const auto& e : manifest.entries) {
        auto rel = [&base](const std::string& p) {
            std::error_code ec;
            fs::path r = fs::relative(p, base, ec);
            return ec || r.empty() ? p : r.string();
        };
        out += e.scene_id + "\t" + rel(e.image_path) + "\t" + rel(e.mask_path) + "\t" + e.split + "\n";
    }
    write_text_file(path, out);
}

} // namespace aeroseg::data
