#include "aeroseg/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace aeroseg::nn {

namespace {

constexpr char kMagic[8] = {'A', 'E', 'R', 'O', 'S', 'E', 'G', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t& off) {
    if (off + 4 > in.size()) throw std::runtime_error("checkpoint truncated");
    const auto* p = reinterpret_cast<const unsigned char*>(in.data() + off);
    off += 4;
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32(std::string& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
}

float get_f32(const std::string& in, std::size_t& off) {
    std::uint32_t bits = get_u32(in, off);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

} // namespace

void save_checkpoint(const std::string& path, Network<float>& net) {
    auto params = net.named_params();
    std::string out;
    out.append(kMagic, 8);
    put_u32(out, static_cast<std::uint32_t>(params.size()));
    for (auto& p : params) {
        put_u32(out, static_cast<std::uint32_t>(p.name.size()));
        out.append(p.name);
        put_u32(out, static_cast<std::uint32_t>(p.tensor->rank()));
        for (std::size_t d : p.tensor->shape()) put_u32(out, static_cast<std::uint32_t>(d));
        for (std::size_t i = 0; i < p.tensor->size(); ++i) put_f32(out, (*p.tensor)[i]);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("checkpoint write failed: " + path);
}

void load_checkpoint(const std::string& path, Network<float>& net) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (in.size() < 12 || std::memcmp(in.data(), kMagic, 8) != 0)
        throw std::runtime_error(path + ": not an AEROSEG1 checkpoint");
    std::size_t off = 8;
    const std::uint32_t count = get_u32(in, off);

    auto params = net.named_params();
    std::vector<bool> filled(params.size(), false);
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::uint32_t name_len = get_u32(in, off);
        if (off + name_len > in.size()) throw std::runtime_error("checkpoint truncated");
        std::string name = in.substr(off, name_len);
        off += name_len;
        const std::uint32_t rank = get_u32(in, off);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = get_u32(in, off);

        Tensor<float>* target = nullptr;
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i].name == name) {
                target = params[i].tensor;
                filled[i] = true;
                break;
            }
        }
        if (!target) throw std::runtime_error(path + ": unexpected tensor '" + name + "'");
        if (target->shape() != shape)
            throw std::runtime_error(path + ": tensor '" + name + "' has shape mismatch (file " +
                                     Tensor<float>(shape).shape_str() + ", network " +
                                     target->shape_str() + ")");
        for (std::size_t i = 0; i < target->size(); ++i) (*target)[i] = get_f32(in, off);
    }
    for (std::size_t i = 0; i < params.size(); ++i)
        if (!filled[i]) throw std::runtime_error(path + ": missing tensor '" + params[i].name + "'");
}

} // namespace aeroseg::nn
