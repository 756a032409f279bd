#include "kinet/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "kinet/velocity_grid.hpp"

namespace kinet {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

ConfigMap ConfigMap::parse_string(const std::string& text) {
    ConfigMap cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("config line " + std::to_string(lineno) + ": empty key or value");
        if (!section.empty()) key = section + "." + key;
        if (cfg.values_.count(key))
            throw config_error("config: duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str());
}

std::string ConfigMap::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw config_error("config: missing required key '" + key + "'");
    touched_.insert(key);
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    touched_.insert(key);
    return it->second;
}

double ConfigMap::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    if (v == "pi") return pi;
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' is not a number: '" + v + "'");
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int ConfigMap::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' is not an integer: '" + v + "'");
    }
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: key '" + key + "' is not a boolean: '" + v + "'");
}

void ConfigMap::reject_unknown() const {
    for (const auto& [key, value] : values_)
        if (!touched_.count(key))
            throw config_error("config: unknown key '" + key + "'");
}

} // namespace kinet
