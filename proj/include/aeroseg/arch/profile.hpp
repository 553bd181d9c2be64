#pragma once

#include <string>
#include <vector>

#include "aeroseg/util/config.hpp"

namespace aeroseg::arch {

struct StemLayerDef {
    bool is_pool = false;
    std::string name;           // conv1, pool1, ...
    int filters = 0, kernel = 0, stride = 1, pad = 0;
};

// Network family description. Two built-ins: "desk" (CPU-sized, the profile
// every test trains) and "paper-shaped" (VGG/AlexNet-like stem depths with
// reduced channel counts). Any other name is read as a key=value file.
struct Profile {
    std::string name;
    int local_input = 64;
    int global_input = 256;
    int output = 16; // label patch width; heads end in output^2 units

    std::vector<StemLayerDef> local_stem;
    std::vector<StemLayerDef> global_stem;

    int head_local_hidden = 0;  // L-Seg standalone head: fc hidden -> fc output^2
    int head_global_hidden = 0; // G-Seg / RA-Seg standalone head
    int head_fusion_h1 = 0;     // LG-Seg head: fc h1 -> fc h2 -> fc output^2
    int head_fusion_h2 = 0;

    // Topology rules shared by both built-ins: the local stem is all
    // 3x3/stride-1/pad-1 convs with 2x2/stride-2 pools; the global stem
    // opens with a larger kernel (>=5) and stride (>=2).
    void validate() const;

    KeyValueFile to_keyvalues() const;
    static Profile from_keyvalues(const KeyValueFile& kv);

    static Profile desk();
    static Profile paper_shaped();
    // built-in name or path to a key=value profile file
    static Profile named(const std::string& name_or_path);
};

} // namespace aeroseg::arch
