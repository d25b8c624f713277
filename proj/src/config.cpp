#include "grushin/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace grushin {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParse("cannot open config file " + path, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigParse("line " + std::to_string(line_no) + ": expected key=value", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigParse("line " + std::to_string(line_no) + ": empty key", line_no);
        }
        if (cfg.entries_.count(key)) {
            throw ConfigParse("line " + std::to_string(line_no) + ": duplicate key \"" + key + "\"",
                              line_no);
        }
        cfg.entries_[key] = Entry{value, line_no};
        cfg.order_.emplace_back(key, value);
    }
    return cfg;
}

const ConfigFile::Entry& ConfigFile::require_entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigParse("missing required key \"" + key + "\"", 0);
    }
    consumed_.insert(key);
    return it->second;
}

double ConfigFile::parse_double(const Entry& e, const std::string& key) const {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0') {
        throw ConfigParse("line " + std::to_string(e.line) + ": key \"" + key +
                              "\" is not a number: " + e.value,
                          e.line);
    }
    return v;
}

long long ConfigFile::parse_int(const Entry& e, const std::string& key) const {
    char* end = nullptr;
    const long long v = std::strtoll(e.value.c_str(), &end, 10);
    if (end == e.value.c_str() || *end != '\0') {
        throw ConfigParse("line " + std::to_string(e.line) + ": key \"" + key +
                              "\" is not an integer: " + e.value,
                          e.line);
    }
    return v;
}

std::string ConfigFile::require_string(const std::string& key) const {
    return require_entry(key).value;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return it->second.value;
}

double ConfigFile::require_double(const std::string& key) const {
    return parse_double(require_entry(key), key);
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return parse_double(it->second, key);
}

long long ConfigFile::require_int(const std::string& key) const {
    return parse_int(require_entry(key), key);
}

long long ConfigFile::get_int(const std::string& key, long long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    return parse_int(it->second, key);
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    const std::string& v = it->second.value;
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ConfigParse("line " + std::to_string(it->second.line) + ": key \"" + key +
                          "\" is not a boolean: " + v,
                      it->second.line);
}

std::vector<double> ConfigFile::get_double_list(const std::string& key,
                                                const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    consumed_.insert(key);
    std::vector<double> out;
    std::istringstream ss(it->second.value);
    std::string token;
    while (ss >> token) {
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw ConfigParse("line " + std::to_string(it->second.line) + ": key \"" + key +
                                  "\" has a non-numeric entry: " + token,
                              it->second.line);
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigParse("line " + std::to_string(it->second.line) + ": key \"" + key +
                              "\" needs at least one value",
                          it->second.line);
    }
    return out;
}

void ConfigFile::finalize() const {
    for (const auto& [key, entry] : entries_) {
        if (!consumed_.count(key)) {
            throw ConfigParse("line " + std::to_string(entry.line) + ": unknown key \"" + key +
                                  "\"",
                              entry.line);
        }
    }
}

}  // namespace grushin
