#include "aeroseg/data/pnm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace aeroseg::data {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t offset, const std::string& what) {
    throw std::runtime_error(path + ": malformed header at byte " + std::to_string(offset) + ": " + what);
}

struct Parser {
    std::string bytes;
    std::size_t pos = 0;
    const std::string& path;

    explicit Parser(const std::string& p) : path(p) {
        std::ifstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open image: " + p);
        bytes.assign((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    }

    // whitespace and '#' comments between header tokens
    void skip_space() {
        while (pos < bytes.size()) {
            const char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                return;
            }
        }
    }

    int read_int() {
        skip_space();
        const std::size_t start = pos;
        long v = 0;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1 << 30) fail(path, start, "integer out of range");
            ++pos;
        }
        if (pos == start) fail(path, pos, "expected integer");
        return static_cast<int>(v);
    }

    void expect_magic(const char* magic) {
        if (bytes.size() < 2 || bytes[0] != magic[0] || bytes[1] != magic[1])
            fail(path, 0, std::string("expected ") + magic + " magic");
        pos = 2;
    }

    const unsigned char* payload(std::size_t need) {
        if (pos >= bytes.size()) fail(path, pos, "missing whitespace before pixel data");
        const char c = bytes[pos];
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
            fail(path, pos, "expected single whitespace before pixel data");
        ++pos;
        if (bytes.size() - pos < need)
            throw std::runtime_error(path + ": truncated pixel data at byte " + std::to_string(pos) +
                                     " (need " + std::to_string(need) + " bytes, have " +
                                     std::to_string(bytes.size() - pos) + ")");
        return reinterpret_cast<const unsigned char*>(bytes.data() + pos);
    }
};

void write_binary(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write image: " + path);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw std::runtime_error("image write failed: " + path);
}

std::string header(const char* magic, int w, int h) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s\n%d %d\n255\n", magic, w, h);
    return buf;
}

} // namespace

std::uint8_t quantize_byte(float v) {
    if (!(v > 0.0f)) return 0;
    if (v >= 1.0f) return 255;
    return static_cast<std::uint8_t>(std::floor(v * 255.0f + 0.5f));
}

void save_ppm(const std::string& path, const ImageF& image) {
    std::string out = header("P6", image.width, image.height);
    out.reserve(out.size() + static_cast<std::size_t>(3) * image.height * image.width);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c)
                out.push_back(static_cast<char>(quantize_byte(image.at(c, y, x))));
    write_binary(path, out);
}

ImageF load_ppm(const std::string& path) {
    Parser p(path);
    p.expect_magic("P6");
    const int w = p.read_int();
    const int h = p.read_int();
    const int maxval = p.read_int();
    if (w < 1 || h < 1) fail(path, p.pos, "non-positive dimensions");
    if (maxval != 255) fail(path, p.pos, "maxval must be 255");
    const unsigned char* src = p.payload(static_cast<std::size_t>(3) * w * h);
    ImageF img(h, w);
    std::size_t i = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) img.at(c, y, x) = static_cast<float>(src[i++]) / 255.0f;
    return img;
}

void save_pgm_mask(const std::string& path, const Mask& mask) {
    std::string out = header("P5", mask.width, mask.height);
    out.reserve(out.size() + mask.pixels.size());
    for (auto v : mask.pixels) out.push_back(static_cast<char>(v ? 255 : 0));
    write_binary(path, out);
}

Mask load_pgm_mask(const std::string& path) {
    Parser p(path);
    p.expect_magic("P5");
    const int w = p.read_int();
    const int h = p.read_int();
    const int maxval = p.read_int();
    if (w < 1 || h < 1) fail(path, p.pos, "non-positive dimensions");
    if (maxval != 255) fail(path, p.pos, "maxval must be 255");
    const unsigned char* src = p.payload(static_cast<std::size_t>(w) * h);
    Mask m(h, w);
    for (std::size_t i = 0; i < m.pixels.size(); ++i) {
        if (src[i] == 0)
            m.pixels[i] = 0;
        else if (src[i] == 255)
            m.pixels[i] = 1;
        else
            throw std::runtime_error(path + ": mask byte " + std::to_string(src[i]) + " at pixel " +
                                     std::to_string(i) + " is neither 0 nor 255");
    }
    return m;
}

void save_pgm_map(const std::string& path, const FloatMap& map) {
    std::string out = header("P5", map.width, map.height);
    out.reserve(out.size() + map.pixels.size());
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const bool valid = y >= map.valid_y0 && y < map.valid_y0 + map.valid_h &&
                               x >= map.valid_x0 && x < map.valid_x0 + map.valid_w;
            out.push_back(static_cast<char>(valid ? quantize_byte(map.at(y, x)) : 0));
        }
    }
    write_binary(path, out);
}

} // namespace aeroseg::data
