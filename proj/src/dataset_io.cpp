#include "localcodes/dataset_io.hpp"

#include <json.hpp>

#include "localcodes/binary_io.hpp"
#include "localcodes/errors.hpp"

namespace localcodes {

std::vector<std::uint8_t> encode_dataset(const Dataset& ds) {
    io::ByteWriter w;
    w.magic("LCDS");
    w.u32(kDatasetFormatVersion);
    w.u64(ds.spec.codeword_length);
    w.u64(ds.spec.num_classes);
    w.u64(ds.spec.num_codewords);
    w.u64(ds.spec.random_weight);
    w.f64(ds.spec.perturbation_rate);
    w.u64(ds.spec.seed);
    w.u8(ds.output_coding == OutputCoding::distributed ? 0 : 1);
    w.u64(ds.output_size());
    for (const auto& c : ds.codewords) w.packed_bits(c.bits);
    for (const auto& c : ds.codewords) w.u32(static_cast<std::uint32_t>(c.class_id));
    for (const auto& t : ds.output_targets) w.packed_bits(t);
    for (const auto& cleared : ds.generation_log) {
        w.u32(static_cast<std::uint32_t>(cleared.size()));
        for (auto p : cleared) w.u32(static_cast<std::uint32_t>(p));
    }
    return w.bytes();
}

Dataset decode_dataset(const std::vector<std::uint8_t>& bytes, const std::string& source) {
    io::ByteReader r(bytes, source);
    r.expect_magic("LCDS");
    const auto version = r.u32();
    if (version != kDatasetFormatVersion)
        throw DataError(source + ": unsupported dataset format version " + std::to_string(version));

    Dataset ds;
    ds.spec.codeword_length = r.u64();
    ds.spec.num_classes = r.u64();
    ds.spec.num_codewords = r.u64();
    ds.spec.random_weight = r.u64();
    ds.spec.perturbation_rate = r.f64();
    ds.spec.seed = r.u64();
    const auto coding = r.u8();
    if (coding > 1) throw DataError(source + ": bad output coding tag");
    ds.output_coding = coding == 0 ? OutputCoding::distributed : OutputCoding::one_hot;
    const auto output_length = r.u64();
    try {
        ds.spec.validate();
    } catch (const ConfigError& e) {
        throw DataError(source + ": " + e.what());
    }

    const auto n = ds.spec.num_codewords;
    ds.codewords.resize(n);
    for (auto& c : ds.codewords) c.bits = r.packed_bits(ds.spec.codeword_length);
    for (auto& c : ds.codewords) {
        c.class_id = r.u32();
        if (c.class_id >= ds.spec.num_classes) throw DataError(source + ": class id out of range");
    }
    ds.output_targets.resize(ds.spec.num_classes);
    for (auto& t : ds.output_targets) t = r.packed_bits(output_length);
    ds.generation_log.resize(n);
    for (auto& cleared : ds.generation_log) {
        cleared.resize(r.u32());
        for (auto& p : cleared) p = r.u32();
    }
    r.expect_end();
    return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    io::write_file(path, encode_dataset(dataset));
}

Dataset load_dataset(const std::filesystem::path& path) {
    return decode_dataset(io::read_file(path), path.string());
}

namespace {

nlohmann::json bits_json(const BitVector& v) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = 0; i < v.size(); ++i) arr.push_back(v.test(i) ? 1 : 0);
    return arr;
}

}  // namespace

std::string dataset_to_json(const Dataset& ds) {
    nlohmann::json j;
    j["format_version"] = kDatasetFormatVersion;
    j["spec"] = {{"codeword_length", ds.spec.codeword_length},
                 {"num_classes", ds.spec.num_classes},
                 {"num_codewords", ds.spec.num_codewords},
                 {"random_weight", ds.spec.random_weight},
                 {"perturbation_rate", ds.spec.perturbation_rate},
                 {"seed", ds.spec.seed}};
    j["output_coding"] = to_string(ds.output_coding);
    j["output_targets"] = nlohmann::json::array();
    for (const auto& t : ds.output_targets) j["output_targets"].push_back(bits_json(t));
    if (ds.output_coding == OutputCoding::distributed)
        j["output_target_rule"] = {{"length", kDistributedOutputLength},
                                   {"weight", kDistributedOutputWeight},
                                   {"min_pairwise_distance", kDistributedMinDistance}};
    j["codewords"] = nlohmann::json::array();
    for (std::size_t i = 0; i < ds.codewords.size(); ++i) {
        j["codewords"].push_back({{"class_id", ds.codewords[i].class_id},
                                  {"bits", bits_json(ds.codewords[i].bits)},
                                  {"cleared", i < ds.generation_log.size() ? ds.generation_log[i] : std::vector<std::size_t>{}}});
    }
    return j.dump(1);
}

}  // namespace localcodes
