#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>

namespace condevt::cli {

/// Flat `key = value` settings with optional `[section]` headers. A key under
/// a section is reachable both as `section.key` and as the bare `key`; a
/// section-qualified entry wins over a bare one.
class ConfigFile {
public:
    static ConfigFile parse(std::istream& in);
    static ConfigFile load(const std::filesystem::path& path);

    [[nodiscard]] std::optional<std::string> lookup(const std::string& section, const std::string& key) const;
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

private:
    std::map<std::string, std::string> values_;  // "section.key" or "key"
};

}  // namespace condevt::cli
