#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "creditlab/errors.hpp"

namespace creditlab {

// Plain-text key=value configuration with [section] headers and '#' comments.
class ConfigFile {
  public:
    static ConfigFile parse(std::istream& in) {
        ConfigFile cfg;
        std::string line, section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            if (trimmed.front() == '[') {
                if (trimmed.back() != ']')
                    throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
                section = trim(trimmed.substr(1, trimmed.size() - 2));
                cfg.sections_[section];  // a section may legally be empty
                continue;
            }
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty key");
            if (!cfg.sections_[section].emplace(key, value).second)
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        return cfg;
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string get(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) throw ConfigError("missing section [" + section + "]");
        const auto k = s->second.find(key);
        if (k == s->second.end())
            throw ConfigError("missing key '" + key + "' in section [" + section + "]");
        return k->second;
    }

    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        return has(section, key) ? get(section, key) : fallback;
    }

    // Unknown sections or keys are errors.
    void validate(const std::map<std::string, std::set<std::string>>& schema) const {
        for (const auto& [section, keys] : sections_) {
            const auto s = schema.find(section);
            if (s == schema.end()) throw ConfigError("unknown section [" + section + "]");
            for (const auto& [key, value] : keys)
                if (!s->second.count(key))
                    throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        }
    }

    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t");
        return s.substr(begin, end - begin + 1);
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    for (char c : s) {
        if (c == sep) {
            const std::string t = ConfigFile::trim(item);
            if (!t.empty()) out.push_back(t);
            item.clear();
        } else {
            item += c;
        }
    }
    const std::string t = ConfigFile::trim(item);
    if (!t.empty()) out.push_back(t);
    return out;
}

}  // namespace detail

}  // namespace creditlab
