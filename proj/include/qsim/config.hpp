#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat sectioned key-value file: [section] headers, key = value lines,
// '#' comments. Values keep their raw text; typed getters parse on demand
// and report file/line on failure.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& name);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key) const;

    template <typename T>
    T get_or(const std::string& section, const std::string& key, T fallback) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::string name_;
    std::map<std::string, std::map<std::string, Entry>> sections_;

    const Entry& lookup(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const Entry& e, const std::string& what) const;
};

}  // namespace qsim
