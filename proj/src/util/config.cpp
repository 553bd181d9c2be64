#include "aeroseg/util/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aeroseg {

std::size_t KeyValueFile::find(const std::string& key) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == key) return i;
    return entries_.size();
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    std::size_t i = find(key);
    if (i < entries_.size())
        entries_[i].second = value;
    else
        entries_.emplace_back(key, value);
}

void KeyValueFile::set_int(const std::string& key, long long v) { set(key, std::to_string(v)); }
void KeyValueFile::set_double(const std::string& key, double v) { set(key, format_double(v)); }

bool KeyValueFile::has(const std::string& key) const { return find(key) < entries_.size(); }

const std::string& KeyValueFile::get(const std::string& key) const {
    std::size_t i = find(key);
    if (i == entries_.size()) throw std::runtime_error("missing key: " + key);
    return entries_[i].second;
}

std::string KeyValueFile::get_or(const std::string& key, const std::string& def) const {
    std::size_t i = find(key);
    return i == entries_.size() ? def : entries_[i].second;
}

long long KeyValueFile::get_int(const std::string& key) const {
    return std::stoll(get(key));
}

long long KeyValueFile::get_int_or(const std::string& key, long long def) const {
    return has(key) ? get_int(key) : def;
}

double KeyValueFile::get_double(const std::string& key) const {
    return std::stod(get(key));
}

double KeyValueFile::get_double_or(const std::string& key, double def) const {
    return has(key) ? get_double(key) : def;
}

std::string KeyValueFile::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

void KeyValueFile::save(const std::string& path) const { write_text_file(path, serialize()); }

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
        std::string key = line.substr(start, eq - start);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        std::size_t vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
        if (key.empty()) throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
        kv.set(key, value);
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    try {
        return parse(read_text_file(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace aeroseg
