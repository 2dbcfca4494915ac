#include "heymw/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heymw {

std::string fnv1a64_hex(std::span<const char> bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string checksum_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checksum_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string s = ss.str();
    return fnv1a64_hex(std::span<const char>(s.data(), s.size()));
}

std::string RunManifest::render() const {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["wall_time_ms"] = wall_time_ms;
    j["results"] = results;
    nlohmann::json outs = nlohmann::json::array();
    for (const OutputFile& f : outputs) outs.push_back({{"path", f.path}, {"checksum", f.checksum}});
    j["outputs"] = outs;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::parse(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.wall_time_ms = j.at("wall_time_ms").get<double>();
    m.results = j.at("results");
    for (const auto& f : j.at("outputs"))
        m.outputs.push_back({f.at("path").get<std::string>(), f.at("checksum").get<std::string>()});
    return m;
}

bool RunManifest::operator==(const RunManifest& other) const {
    return tool_version == other.tool_version && subcommand == other.subcommand &&
           parameters == other.parameters && wall_time_ms == other.wall_time_ms &&
           results == other.results && outputs == other.outputs;
}

}  // namespace heymw
