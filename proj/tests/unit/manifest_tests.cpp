#include <doctest.h>

#include <string>

#include "pixelnorm/error.hpp"
#include "pixelnorm/manifest.hpp"
#include "pixelnorm/version.hpp"
#include "support/oracles.hpp"

using namespace pixelnorm;
using testsupport::TempDir;

TEST_CASE("hash_file matches the published FNV-1a vectors") {
    TempDir tmp;

    testsupport::spit(tmp.file("empty"), "");
    CHECK(hash_file(tmp.file("empty")) == "cbf29ce484222325");

    testsupport::spit(tmp.file("a"), "a");
    CHECK(hash_file(tmp.file("a")) == "af63dc4c8601ec8c");

    testsupport::spit(tmp.file("hello"), "hello");
    CHECK(hash_file(tmp.file("hello")) == "a430d84680aabd0b");

    CHECK_THROWS_AS(hash_file(tmp.file("missing")), IoError);
}

TEST_CASE("manifest write/load round trips every field") {
    RunManifest m;
    m.command = "normalize";
    m.parameters = {{"mode", "global"}, {"a", "0"}, {"b", "255"}};
    m.input_hashes = {{"in.csv", "cbf29ce484222325"}};
    m.seed = 12345;
    m.artifacts = {"out.pgm", "out.pgm.norm.json"};
    m.tool_version = kVersion;

    TempDir tmp;
    const std::string path = tmp.file("manifest.json");
    write_manifest(m, path);
    RunManifest back = load_manifest(path);

    CHECK(back.command == m.command);
    CHECK(back.parameters == m.parameters);
    CHECK(back.input_hashes == m.input_hashes);
    CHECK(back.seed == m.seed);
    CHECK(back.artifacts == m.artifacts);
    CHECK(back.tool_version == m.tool_version);

    // The timestamp is written for humans but is not part of the round trip.
    CHECK(testsupport::slurp(path).find("generated_at") != std::string::npos);
}

TEST_CASE("artifacts come back sorted regardless of insertion order") {
    RunManifest m;
    m.command = "render";
    m.artifacts = {"z.pgm", "a.csv", "m.json"};
    TempDir tmp;
    const std::string path = tmp.file("manifest.json");
    write_manifest(m, path);
    RunManifest back = load_manifest(path);
    CHECK(back.artifacts == std::vector<std::string>{"a.csv", "m.json", "z.pgm"});
}

TEST_CASE("load_manifest rejects malformed files") {
    TempDir tmp;
    const std::string path = tmp.file("broken.json");
    testsupport::spit(path, "{\"command\": 42}");
    CHECK_THROWS_AS(load_manifest(path), DataError);
    testsupport::spit(path, "not json at all");
    CHECK_THROWS_AS(load_manifest(path), DataError);
    CHECK_THROWS_AS(load_manifest(tmp.file("absent.json")), IoError);
}
