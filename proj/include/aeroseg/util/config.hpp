#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace aeroseg {

// Ordered key=value store used for profile files, synth params, and the
// resolved-config echo written next to every CLI run's outputs.
// '#' starts a comment; blank lines ignored; keys are unique.
class KeyValueFile {
public:
    void set(const std::string& key, const std::string& value);
    void set_int(const std::string& key, long long v);
    void set_double(const std::string& key, double v);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;               // throws if missing
    std::string get_or(const std::string& key, const std::string& def) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long def) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double def) const;

    std::string serialize() const;
    void save(const std::string& path) const;

    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::size_t find(const std::string& key) const;
};

// Shortest round-trip formatting for doubles (printf %.17g trimmed).
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace aeroseg
