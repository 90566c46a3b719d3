#include "localcodes/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "localcodes/errors.hpp"

namespace localcodes {

std::size_t CodeSpec::flips_per_codeword() const {
    return static_cast<std::size_t>(std::llround(perturbation_rate * static_cast<double>(block_length())));
}

double CodeSpec::random_sparseness() const {
    const auto region = random_region_length();
    return region == 0 ? 0.0 : static_cast<double>(random_weight) / static_cast<double>(region);
}

double CodeSpec::expected_sparseness() const {
    return (static_cast<double>(prototype_weight()) * (1.0 - perturbation_rate) + static_cast<double>(random_weight)) /
           static_cast<double>(codeword_length);
}

void CodeSpec::validate() const {
    if (codeword_length == 0) throw ConfigError("codeword_length must be positive");
    if (num_classes == 0) throw ConfigError("num_classes must be positive");
    if (num_codewords == 0) throw ConfigError("num_codewords must be positive");
    if (codeword_length % num_classes != 0)
        throw ConfigError("codeword_length (" + std::to_string(codeword_length) + ") must be divisible by num_classes (" +
                          std::to_string(num_classes) + ")");
    if (num_codewords % num_classes != 0)
        throw ConfigError("num_codewords (" + std::to_string(num_codewords) + ") must be divisible by num_classes (" +
                          std::to_string(num_classes) + ")");
    if (random_weight > random_region_length())
        throw ConfigError("random_weight (" + std::to_string(random_weight) + ") exceeds the non-prototype region (" +
                          std::to_string(random_region_length()) + " bits)");
    if (!(perturbation_rate >= 0.0 && perturbation_rate <= 1.0))
        throw ConfigError("perturbation_rate must lie in [0, 1]");
}

std::string_view to_string(OutputCoding coding) {
    return coding == OutputCoding::distributed ? "distributed" : "one_hot";
}

OutputCoding parse_output_coding(std::string_view name) {
    if (name == "distributed") return OutputCoding::distributed;
    if (name == "one_hot" || name == "one-hot" || name == "onehot") return OutputCoding::one_hot;
    throw ConfigError("unknown output coding '" + std::string(name) + "' (expected distributed|one_hot)");
}

std::vector<BitVector> make_prototypes(const CodeSpec& spec) {
    spec.validate();
    const auto block = spec.block_length();
    std::vector<BitVector> prototypes;
    prototypes.reserve(spec.num_classes);
    for (std::size_t k = 0; k < spec.num_classes; ++k) {
        BitVector p(spec.codeword_length);
        for (std::size_t i = k * block; i < (k + 1) * block; ++i) p.set(i);
        prototypes.push_back(std::move(p));
    }
    return prototypes;
}

Perturbation perturb_prototype(const BitVector& prototype, double rate, Rng& rng) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw UsageError("perturbation rate must lie in [0, 1]");
    const auto ones = prototype.ones();
    const auto flips = static_cast<std::size_t>(std::llround(rate * static_cast<double>(ones.size())));
    Perturbation out{prototype, {}};
    if (flips == 0) return out;
    for (auto idx : rng.sample_without_replacement(ones.size(), flips)) {
        out.bits.reset(ones[idx]);
        out.cleared.push_back(ones[idx]);
    }
    std::sort(out.cleared.begin(), out.cleared.end());
    return out;
}

BitVector make_random_fill(const CodeSpec& spec, Rng& rng) {
    const auto region = spec.random_region_length();
    if (spec.random_weight > region)
        throw ConfigError("random_weight (" + std::to_string(spec.random_weight) + ") exceeds the non-prototype region (" +
                          std::to_string(region) + " bits)");
    BitVector fill(region);
    for (auto pos : rng.sample_without_replacement(region, spec.random_weight)) fill.set(pos);
    return fill;
}

void place_fill(BitVector& codeword, const BitVector& fill, const CodeSpec& spec, std::size_t class_id) {
    const auto block = spec.block_length();
    const auto begin = class_id * block;
    for (auto i : fill.ones()) codeword.set(i < begin ? i : i + block);
}

std::vector<BitVector> make_distributed_targets(std::size_t num_classes, Rng& rng) {
    constexpr int kMaxAttempts = 10000;
    std::vector<BitVector> targets;
    targets.reserve(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            BitVector t(kDistributedOutputLength);
            for (auto pos : rng.sample_without_replacement(kDistributedOutputLength, kDistributedOutputWeight)) t.set(pos);
            placed = std::all_of(targets.begin(), targets.end(),
                                 [&](const BitVector& o) { return hamming(o, t) >= kDistributedMinDistance; });
            if (placed) targets.push_back(std::move(t));
        }
        if (!placed) throw GenerationError("could not place distributed output target for class " + std::to_string(c));
    }
    return targets;
}

std::vector<BitVector> make_one_hot_targets(std::size_t num_classes) {
    std::vector<BitVector> targets(num_classes, BitVector(num_classes));
    for (std::size_t c = 0; c < num_classes; ++c) targets[c].set(c);
    return targets;
}

Dataset generate_dataset(const CodeSpec& spec, OutputCoding coding, Rng& rng) {
    spec.validate();
    Dataset ds;
    ds.spec = spec;
    ds.output_coding = coding;

    const auto prototypes = make_prototypes(spec);
    std::set<BitVector> seen;
    ds.codewords.reserve(spec.num_codewords);
    ds.generation_log.reserve(spec.num_codewords);

    for (std::size_t i = 0; i < spec.num_codewords; ++i) {
        const auto class_id = i % spec.num_classes;
        bool accepted = false;
        for (int attempt = 0; attempt <= kMaxDuplicateRetries && !accepted; ++attempt) {
            auto pert = perturb_prototype(prototypes[class_id], spec.perturbation_rate, rng);
            place_fill(pert.bits, make_random_fill(spec, rng), spec, class_id);
            if (seen.insert(pert.bits).second) {
                ds.codewords.push_back({std::move(pert.bits), class_id});
                ds.generation_log.push_back(std::move(pert.cleared));
                accepted = true;
            }
        }
        if (!accepted)
            throw GenerationError("codeword " + std::to_string(i) + " still duplicated after " +
                                  std::to_string(kMaxDuplicateRetries) + " retries; the spec is too constrained");
    }

    ds.output_targets = coding == OutputCoding::distributed ? make_distributed_targets(spec.num_classes, rng)
                                                            : make_one_hot_targets(spec.num_classes);
    return ds;
}

Dataset generate_dataset(const CodeSpec& spec, OutputCoding coding) {
    Rng rng(spec.seed);
    return generate_dataset(spec, coding, rng);
}

DistanceAudit distance_audit(const Dataset& dataset) {
    using Range = std::pair<std::size_t, std::size_t>;
    auto widen = [](std::optional<Range>& r, std::size_t d) {
        if (!r) r = Range{d, d};
        else r = Range{std::min(r->first, d), std::max(r->second, d)};
    };
    DistanceAudit audit;
    const auto& cw = dataset.codewords;
    for (std::size_t i = 0; i < cw.size(); ++i)
        for (std::size_t j = i + 1; j < cw.size(); ++j)
            widen(cw[i].class_id == cw[j].class_id ? audit.within_class : audit.between_class, hamming(cw[i].bits, cw[j].bits));
    if (audit.within_class && audit.between_class)
        audit.overlap = audit.within_class->first <= audit.between_class->second &&
                        audit.between_class->first <= audit.within_class->second;
    return audit;
}

}  // namespace localcodes
