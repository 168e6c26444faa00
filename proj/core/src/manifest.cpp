#include "pixelnorm/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "pixelnorm/error.hpp"
#include "pixelnorm/version.hpp"

namespace pixelnorm {

std::string hash_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);

    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (file) {
        file.read(buf, sizeof(buf));
        const std::streamsize got = file.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    if (file.bad()) throw IoError("read failed on " + path);

    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    j["input_hashes"] = m.input_hashes;
    j["seed"] = m.seed;
    std::vector<std::string> artifacts = m.artifacts;
    std::sort(artifacts.begin(), artifacts.end());
    j["artifacts"] = artifacts;
    j["tool_version"] = m.tool_version.empty() ? kVersion : m.tool_version.c_str();

    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = stamp;

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    file << j.dump(2) << '\n';
    file.flush();
    if (!file) throw IoError("write failed on " + path);
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);

    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest " + path + ": " + e.what());
    }

    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
        m.input_hashes = j.at("input_hashes").get<std::map<std::string, std::string>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
        m.tool_version = j.at("tool_version").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed manifest " + path + ": " + e.what());
    }
    return m;
}

}  // namespace pixelnorm
