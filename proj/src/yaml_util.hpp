#pragma once

#include "qnec/config.hpp"

#include <yaml-cpp/yaml.h>

#include <string>
#include <vector>

namespace qnec::yaml {

inline ConfigError error_at(const YAML::Node& node, const std::string& msg) {
    const auto m = node.Mark();
    if (m.is_null()) return ConfigError(msg, 0, 0);
    return ConfigError(msg, m.line + 1, m.column + 1);
}

inline YAML::Node parse(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

inline YAML::Node require(const YAML::Node& parent, const std::string& key) {
    const YAML::Node n = parent[key];
    if (!n) throw error_at(parent, "missing key '" + key + "'");
    return n;
}

template <class T>
T as(const YAML::Node& node, const std::string& what) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw error_at(node, "invalid value for '" + what + "'");
    }
}

template <class T>
T get_or(const YAML::Node& parent, const std::string& key, T fallback) {
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    return as<T>(n, key);
}

template <class T>
std::vector<T> as_list(const YAML::Node& node, const std::string& what) {
    if (!node.IsSequence()) throw error_at(node, "'" + what + "' must be a list");
    std::vector<T> out;
    for (const auto& item : node) out.push_back(as<T>(item, what));
    return out;
}

}  // namespace qnec::yaml
