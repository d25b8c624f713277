#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

/// Flat key=value configuration: one key per line, '#' starts a comment.
/// Typed getters record which keys were consumed; finalize() rejects
/// anything left over so typos surface as config errors.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string require_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double require_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long require_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    /// Throws ConfigParse on the first key that no getter asked about.
    void finalize() const;

    /// Keys in file order with their raw values (consumed or defaulted),
    /// for embedding the resolved configuration into artifacts.
    const std::vector<std::pair<std::string, std::string>>& items() const { return order_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
    std::vector<std::pair<std::string, std::string>> order_;
    mutable std::set<std::string> consumed_;

    const Entry& require_entry(const std::string& key) const;
    double parse_double(const Entry& e, const std::string& key) const;
    long long parse_int(const Entry& e, const std::string& key) const;
};

}  // namespace grushin
