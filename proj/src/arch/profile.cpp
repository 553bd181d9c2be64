#include "aeroseg/arch/profile.hpp"

#include <stdexcept>

namespace aeroseg::arch {

namespace {

StemLayerDef conv_def(std::string name, int filters, int kernel, int stride, int pad) {
    StemLayerDef d;
    d.name = std::move(name);
    d.filters = filters;
    d.kernel = kernel;
    d.stride = stride;
    d.pad = pad;
    return d;
}

StemLayerDef pool_def(std::string name) {
    StemLayerDef d;
    d.is_pool = true;
    d.name = std::move(name);
    d.kernel = 2;
    d.stride = 2;
    return d;
}

} // namespace

void Profile::validate() const {
    if (local_input < 1 || global_input < 1 || output < 1)
        throw std::invalid_argument("profile " + name + ": widths must be positive");
    if (local_stem.empty() || global_stem.empty())
        throw std::invalid_argument("profile " + name + ": both stems must be non-empty");
    for (const auto& l : local_stem) {
        if (l.is_pool) continue;
        if (l.kernel != 3 || l.stride != 1 || l.pad != 1)
            throw std::invalid_argument("profile " + name + ": local stem layer " + l.name +
                                        " must be a 3x3/stride-1/pad-1 conv");
    }
    const auto& first = global_stem.front();
    if (first.is_pool || first.kernel < 5 || first.stride < 2)
        throw std::invalid_argument("profile " + name +
                                    ": global stem must open with a conv of kernel >= 5 and stride >= 2");
    if (head_local_hidden < 1 || head_global_hidden < 1 || head_fusion_h1 < 1 || head_fusion_h2 < 1)
        throw std::invalid_argument("profile " + name + ": head widths must be positive");
}

KeyValueFile Profile::to_keyvalues() const {
    KeyValueFile kv;
    kv.set("name", name);
    kv.set_int("input.local", local_input);
    kv.set_int("input.global", global_input);
    kv.set_int("output", output);
    auto emit_stem = [&kv](const std::string& prefix, const std::vector<StemLayerDef>& stem) {
        std::string order;
        for (const auto& l : stem) {
            if (!order.empty()) order += ",";
            order += l.name;
        }
        kv.set(prefix + ".layers", order);
        for (const auto& l : stem) {
            if (l.is_pool) {
                kv.set_int(prefix + "." + l.name + ".size", l.kernel);
                kv.set_int(prefix + "." + l.name + ".stride", l.stride);
            } else {
                kv.set_int(prefix + "." + l.name + ".filters", l.filters);
                kv.set_int(prefix + "." + l.name + ".kernel", l.kernel);
                kv.set_int(prefix + "." + l.name + ".stride", l.stride);
                kv.set_int(prefix + "." + l.name + ".pad", l.pad);
            }
        }
    };
    emit_stem("local", local_stem);
    emit_stem("global", global_stem);
    kv.set_int("head.local.hidden", head_local_hidden);
    kv.set_int("head.global.hidden", head_global_hidden);
    kv.set_int("head.fusion.hidden1", head_fusion_h1);
    kv.set_int("head.fusion.hidden2", head_fusion_h2);
    return kv;
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

Profile Profile::from_keyvalues(const KeyValueFile& kv) {
    Profile p;
    p.name = kv.get("name");
    p.local_input = static_cast<int>(kv.get_int("input.local"));
    p.global_input = static_cast<int>(kv.get_int("input.global"));
    p.output = static_cast<int>(kv.get_int("output"));
    auto read_stem = [&kv](const std::string& prefix) {
        std::vector<StemLayerDef> stem;
        for (const auto& lname : split_csv(kv.get(prefix + ".layers"))) {
            StemLayerDef d;
            d.name = lname;
            const std::string base = prefix + "." + lname + ".";
            if (lname.rfind("pool", 0) == 0) {
                d.is_pool = true;
                d.kernel = static_cast<int>(kv.get_int_or(base + "size", 2));
                d.stride = static_cast<int>(kv.get_int_or(base + "stride", 2));
                if (d.kernel != 2 || d.stride != 2)
                    throw std::invalid_argument(prefix + "." + lname + ": only 2x2/stride-2 pooling is supported");
            } else if (lname.rfind("conv", 0) == 0) {
                d.filters = static_cast<int>(kv.get_int(base + "filters"));
                d.kernel = static_cast<int>(kv.get_int(base + "kernel"));
                d.stride = static_cast<int>(kv.get_int_or(base + "stride", 1));
                d.pad = static_cast<int>(kv.get_int_or(base + "pad", 0));
            } else {
                throw std::invalid_argument(prefix + "." + lname + ": layer names must start with conv or pool");
            }
            stem.push_back(d);
        }
        return stem;
    };
    p.local_stem = read_stem("local");
    p.global_stem = read_stem("global");
    p.head_local_hidden = static_cast<int>(kv.get_int("head.local.hidden"));
    p.head_global_hidden = static_cast<int>(kv.get_int("head.global.hidden"));
    p.head_fusion_h1 = static_cast<int>(kv.get_int("head.fusion.hidden1"));
    p.head_fusion_h2 = static_cast<int>(kv.get_int("head.fusion.hidden2"));
    p.validate();
    return p;
}

Profile Profile::desk() {
    Profile p;
    p.name = "desk";
    p.local_stem = {
        conv_def("conv1", 8, 3, 1, 1),  pool_def("pool1"),
        conv_def("conv2", 16, 3, 1, 1), pool_def("pool2"),
        conv_def("conv3", 16, 3, 1, 1), conv_def("conv4", 16, 3, 1, 1),
    };
    p.global_stem = {
        conv_def("conv1", 8, 7, 4, 3),  pool_def("pool1"),
        conv_def("conv2", 16, 5, 2, 2), pool_def("pool2"),
        conv_def("conv3", 16, 3, 1, 1),
    };
    p.head_local_hidden = 32;
    p.head_global_hidden = 32;
    p.head_fusion_h1 = 64;
    p.head_fusion_h2 = 64;
    return p;
}

Profile Profile::paper_shaped() {
    Profile p;
    p.name = "paper-shaped";
    p.local_stem = {
        conv_def("conv1", 16, 3, 1, 1), conv_def("conv2", 16, 3, 1, 1), pool_def("pool1"),
        conv_def("conv3", 32, 3, 1, 1), conv_def("conv4", 32, 3, 1, 1), pool_def("pool2"),
        conv_def("conv5", 64, 3, 1, 1), conv_def("conv6", 64, 3, 1, 1),
    };
    p.global_stem = {
        conv_def("conv1", 16, 11, 4, 5), pool_def("pool1"),
        conv_def("conv2", 32, 5, 1, 2),  pool_def("pool2"),
        conv_def("conv3", 48, 3, 1, 1),  pool_def("pool3"),
    };
    p.head_local_hidden = 512;
    p.head_global_hidden = 512;
    p.head_fusion_h1 = 512;
    p.head_fusion_h2 = 512;
    return p;
}

Profile Profile::named(const std::string& name_or_path) {
    if (name_or_path == "desk") return desk();
    if (name_or_path == "paper-shaped") return paper_shaped();
    return from_keyvalues(KeyValueFile::load(name_or_path));
}

} // namespace aeroseg::arch
