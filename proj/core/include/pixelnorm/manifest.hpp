#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pixelnorm {

// Everything needed to re-run a command identically: the effective parameter
// set after defaults, hashes of the inputs, the seed, and every artifact the
// run produced (paths relative to the manifest's own directory, so moving the
// output tree keeps the manifest valid).
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::map<std::string, std::string> input_hashes;  // input path -> 64-bit FNV-1a hex
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    std::string tool_version;
};

// FNV-1a 64-bit digest of the file bytes, as 16 lowercase hex digits.
std::string hash_file(const std::string& path);

void write_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace pixelnorm
