#include "qsim/config.hpp"

#include <fstream>
#include <sstream>

namespace qsim {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) +
                              ": key outside any [section]");
        cfg.sections_[section][key] = Entry{value, lineno};
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const Config::Entry& Config::lookup(const std::string& section,
                                    const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw ConfigError(name_ + ": missing required key [" + section + "] " + key);
    return s->second.at(key);
}

void Config::fail(const Entry& e, const std::string& what) const {
    throw ConfigError(name_ + ":" + std::to_string(e.line) + ": " + what);
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
    return lookup(section, key).value;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = lookup(section, key);
    try {
        size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(e, "'" + key + "' is not a number: " + e.value);
    }
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const Entry& e = lookup(section, key);
    try {
        size_t pos = 0;
        long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        fail(e, "'" + key + "' is not an integer: " + e.value);
    }
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
    const Entry& e = lookup(section, key);
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(e, "'" + key + "' is not a boolean: " + e.value);
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const Entry& e = lookup(section, key);
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail(e, "'" + key + "' has a non-numeric entry: " + item);
        }
    }
    if (out.empty()) fail(e, "'" + key + "' is an empty list");
    return out;
}

template <typename T>
T Config::get_or(const std::string& section, const std::string& key,
                 T fallback) const {
    if (!has(section, key)) return fallback;
    if constexpr (std::is_same_v<T, double>) return get_double(section, key);
    else if constexpr (std::is_same_v<T, long>) return get_int(section, key);
    else if constexpr (std::is_same_v<T, int>) return int(get_int(section, key));
    else if constexpr (std::is_same_v<T, bool>) return get_bool(section, key);
    else return get_string(section, key);
}

template double Config::get_or(const std::string&, const std::string&, double) const;
template long Config::get_or(const std::string&, const std::string&, long) const;
template int Config::get_or(const std::string&, const std::string&, int) const;
template bool Config::get_or(const std::string&, const std::string&, bool) const;
template std::string Config::get_or(const std::string&, const std::string&,
                                    std::string) const;

}  // namespace qsim
