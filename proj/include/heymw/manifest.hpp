#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace heymw {

// Provenance record written next to every command's outputs. Keys are kept
// in sorted order so rendering is stable; parse(render(m)) == m.
struct RunManifest {
    std::string tool_version;
    std::string subcommand;
    std::map<std::string, std::string> parameters;
    double wall_time_ms = 0.0;
    nlohmann::json results = nlohmann::json::object();

    struct OutputFile {
        std::string path;
        std::string checksum;  // fnv1a-64 of the file bytes, hex
        bool operator==(const OutputFile&) const = default;
    };
    std::vector<OutputFile> outputs;

    std::string render() const;
    static RunManifest parse(const std::string& text);
    bool operator==(const RunManifest& other) const;
};

/// FNV-1a 64-bit checksum, rendered as 16 hex digits.
std::string fnv1a64_hex(std::span<const char> bytes);
std::string checksum_file(const std::string& path);

}  // namespace heymw
