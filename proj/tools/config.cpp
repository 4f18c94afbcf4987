#include "config.hpp"

#include <fstream>

#include "condevt/errors.hpp"

namespace condevt::cli {

namespace {

std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
    ConfigFile cfg;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw InputError("config line " + std::to_string(lineno) + ": bad section header");
            section = strip(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw InputError("config line " + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = value;
        if (!section.empty() && !cfg.values_.contains(key)) cfg.values_[key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path.string() + "'");
    return parse(in);
}

std::optional<std::string> ConfigFile::lookup(const std::string& section, const std::string& key) const {
    if (auto it = values_.find(section + "." + key); it != values_.end()) return it->second;
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return std::nullopt;
}

}  // namespace condevt::cli
