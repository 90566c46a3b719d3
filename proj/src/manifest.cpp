#include "localcodes/manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <memory>

#include <openssl/evp.h>

#include "localcodes/binary_io.hpp"
#include "localcodes/errors.hpp"

namespace localcodes {

namespace {

std::string digest_hex(const unsigned char* data, std::size_t size) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data, size) != 1 || EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
        throw DataError("sha256: digest computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

nlohmann::json digests_json(const std::vector<FileDigest>& files) {
    auto arr = nlohmann::json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
}

std::vector<FileDigest> digests_from(const nlohmann::json& arr) {
    std::vector<FileDigest> out;
    for (const auto& f : arr) out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    return out;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    return digest_hex(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
}

std::string sha256_file(const std::filesystem::path& path) {
    const auto bytes = io::read_file(path);
    return digest_hex(bytes.data(), bytes.size());
}

nlohmann::json to_json(const RunRecord& run) {
    return {{"tool_version", run.tool_version},
            {"subcommand", run.subcommand},
            {"argv", run.argv},
            {"config", run.config},
            {"seed", run.seed},
            {"started_at", run.started_at},
            {"finished_at", run.finished_at},
            {"status", run.status},
            {"error", run.error},
            {"inputs", digests_json(run.inputs)},
            {"outputs", digests_json(run.outputs)}};
}

RunRecord run_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.subcommand = j.at("subcommand").get<std::string>();
    r.argv = j.at("argv").get<std::vector<std::string>>();
    r.config = j.at("config");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.error = j.at("error").get<std::string>();
    r.inputs = digests_from(j.at("inputs"));
    r.outputs = digests_from(j.at("outputs"));
    return r;
}

RunManifest read_manifest(const std::filesystem::path& dir) {
    const auto path = dir / kManifestFile;
    RunManifest m;
    if (!std::filesystem::exists(path)) return m;
    try {
        const auto j = nlohmann::json::parse(io::read_text(path));
        if (j.at("format_version").get<int>() != kManifestFormatVersion)
            throw DataError(path.string() + ": unsupported manifest version");
        for (const auto& run : j.at("runs")) m.runs.push_back(run_from_json(run));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return m;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
    nlohmann::json j;
    j["format_version"] = kManifestFormatVersion;
    j["runs"] = nlohmann::json::array();
    for (const auto& run : manifest.runs) j["runs"].push_back(to_json(run));
    const auto path = dir / kManifestFile;
    const auto tmp = dir / (std::string(kManifestFile) + ".tmp");
    io::write_text(tmp, j.dump(2) + "\n");
    std::filesystem::rename(tmp, path);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    const auto n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%.*s.%03dZ", static_cast<int>(n), buf, static_cast<int>(ms));
    return out;
}

ManifestWriter::ManifestWriter(std::filesystem::path dir, RunRecord run) : dir_(std::move(dir)), run_(std::move(run)) {
    std::filesystem::create_directories(dir_);
    if (run_.started_at.empty()) run_.started_at = utc_timestamp();
    run_.status = "running";
    auto m = read_manifest(dir_);
    index_ = m.runs.size();
    m.runs.push_back(run_);
    write_manifest(dir_, m);
}

void ManifestWriter::store() {
    auto m = read_manifest(dir_);
    if (index_ < m.runs.size())
        m.runs[index_] = run_;
    else
        m.runs.push_back(run_);
    write_manifest(dir_, m);
}

void ManifestWriter::finish(const std::vector<std::filesystem::path>& outputs) {
    for (const auto& p : outputs) run_.outputs.push_back({p.string(), sha256_file(p)});
    run_.finished_at = utc_timestamp();
    run_.status = "ok";
    store();
}

void ManifestWriter::fail(const std::string& error) {
    run_.finished_at = utc_timestamp();
    run_.status = "failed";
    run_.error = error;
    store();
}

}  // namespace localcodes
