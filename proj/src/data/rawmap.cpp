#include "aeroseg/data/rawmap.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace aeroseg::data {

namespace {

constexpr char kMagic[8] = {'A', 'E', 'R', 'O', 'M', 'A', 'P', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t& off) {
    if (off + 4 > in.size()) throw std::runtime_error("raw map truncated");
    const auto* p = reinterpret_cast<const unsigned char*>(in.data() + off);
    off += 4;
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

} // namespace

void save_rawmap(const std::string& path, const FloatMap& map) {
    std::string out;
    out.append(kMagic, 8);
    put_u32(out, static_cast<std::uint32_t>(map.height));
    put_u32(out, static_cast<std::uint32_t>(map.width));
    put_u32(out, static_cast<std::uint32_t>(map.valid_y0));
    put_u32(out, static_cast<std::uint32_t>(map.valid_x0));
    put_u32(out, static_cast<std::uint32_t>(map.valid_h));
    put_u32(out, static_cast<std::uint32_t>(map.valid_w));
    for (float f : map.pixels) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(out, bits);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write raw map: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("raw map write failed: " + path);
}

FloatMap load_rawmap(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open raw map: " + path);
    std::string in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (in.size() < 32 || std::memcmp(in.data(), kMagic, 8) != 0)
        throw std::runtime_error(path + ": not an AEROMAP1 file");
    std::size_t off = 8;
    FloatMap map;
    map.height = static_cast<int>(get_u32(in, off));
    map.width = static_cast<int>(get_u32(in, off));
    map.valid_y0 = static_cast<int>(get_u32(in, off));
    map.valid_x0 = static_cast<int>(get_u32(in, off));
    map.valid_h = static_cast<int>(get_u32(in, off));
    map.valid_w = static_cast<int>(get_u32(in, off));
    const std::size_t n = static_cast<std::size_t>(map.height) * map.width;
    if (in.size() - off != n * 4)
        throw std::runtime_error(path + ": pixel payload size mismatch");
    map.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits = get_u32(in, off);
        std::memcpy(&map.pixels[i], &bits, 4);
    }
    return map;
}

} // namespace aeroseg::data
