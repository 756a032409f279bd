#ifndef KINET_CONFIG_HPP
#define KINET_CONFIG_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "kinet/errors.hpp"

namespace kinet {

// Sectioned key/value text:
//   # comment
//   [section]
//   key = value
// Keys are addressed as "section.key"; keys before any section header have no
// prefix.  Duplicate keys are rejected.
class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // all keys must be consumed through the getters above; anything else is
    // reported as unknown (config validation names the offending field)
    void reject_unknown() const;

    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> touched_;
};

} // namespace kinet

#endif
