#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace localcodes {

inline constexpr const char* kManifestFile = "run_manifest.json";
inline constexpr int kManifestFormatVersion = 1;

/// Lowercase hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

struct FileDigest {
    std::string path;  // as given on the command line / written by the tool
    std::string sha256;
};

/// One invocation of a subcommand writing into an output directory.
struct RunRecord {
    std::string tool_version;
    std::string subcommand;
    std::vector<std::string> argv;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string started_at;   // ISO 8601 UTC
    std::string finished_at;  // empty while running
    std::string status = "running";  // running | ok | failed
    std::string error;
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
};

nlohmann::json to_json(const RunRecord& run);
RunRecord run_from_json(const nlohmann::json& j);

/// The single manifest of an output directory: every run that wrote into it,
/// oldest first.
struct RunManifest {
    std::vector<RunRecord> runs;
};

RunManifest read_manifest(const std::filesystem::path& dir);  // empty if absent
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

std::string utc_timestamp();

/// Appends `run` to the directory's manifest on construction (status
/// "running", before any heavy work) and rewrites that entry on finish().
class ManifestWriter {
public:
    ManifestWriter(std::filesystem::path dir, RunRecord run);

    RunRecord& run() { return run_; }
    /// Digests and records output files, marks the run ok.
    void finish(const std::vector<std::filesystem::path>& outputs);
    void fail(const std::string& error);

private:
    void store();

    std::filesystem::path dir_;
    RunRecord run_;
    std::size_t index_ = 0;
};

}  // namespace localcodes
