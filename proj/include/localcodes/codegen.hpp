#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "localcodes/bitvector.hpp"
#include "localcodes/rng.hpp"

namespace localcodes {

/// Parameters of a prototype-block code.
///
/// Each class owns a contiguous block of `block_length()` ones. A codeword is
/// its class prototype with a fraction of the block cleared (perturbation)
/// plus `random_weight` ones scattered over the other positions.
struct CodeSpec {
    std::size_t codeword_length = 500;
    std::size_t num_classes = 10;
    std::size_t num_codewords = 500;
    std::size_t random_weight = 150;
    double perturbation_rate = 0.0;
    std::uint64_t seed = 0;

    std::size_t block_length() const { return codeword_length / num_classes; }
    std::size_t prototype_weight() const { return block_length(); }
    std::size_t random_region_length() const { return codeword_length - block_length(); }
    std::size_t codewords_per_class() const { return num_codewords / num_classes; }

    /// Ones cleared from the block of every codeword.
    std::size_t flips_per_codeword() const;

    /// S_R: fraction of ones in the random region.
    double random_sparseness() const;
    /// S_x in expectation: (w_P (1 - P) + w_R) / L_x.
    double expected_sparseness() const;

    /// Throws ConfigError naming the violated constraint.
    void validate() const;

    friend bool operator==(const CodeSpec&, const CodeSpec&) = default;
};

enum class OutputCoding { distributed, one_hot };

std::string_view to_string(OutputCoding coding);
OutputCoding parse_output_coding(std::string_view name);

// Distributed output targets: one codeword per class, sampled uniformly from
// the weight-25 vectors of length 50 and rejected until every pair is at
// least 10 bits apart.
inline constexpr std::size_t kDistributedOutputLength = 50;
inline constexpr std::size_t kDistributedOutputWeight = 25;
inline constexpr std::size_t kDistributedMinDistance = 10;
inline constexpr int kMaxDuplicateRetries = 100;

struct Codeword {
    BitVector bits;
    std::size_t class_id = 0;

    friend bool operator==(const Codeword&, const Codeword&) = default;
};

struct Dataset {
    CodeSpec spec;
    OutputCoding output_coding = OutputCoding::distributed;
    std::vector<Codeword> codewords;
    /// One target per class.
    std::vector<BitVector> output_targets;
    /// Per codeword: the prototype-block positions that were cleared.
    std::vector<std::vector<std::size_t>> generation_log;

    std::size_t input_size() const { return spec.codeword_length; }
    std::size_t output_size() const { return output_targets.empty() ? 0 : output_targets.front().size(); }
    const BitVector& target_for(std::size_t item) const { return output_targets.at(codewords.at(item).class_id); }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// One prototype per class; prototype k has ones exactly on
/// [k * block, (k + 1) * block).
std::vector<BitVector> make_prototypes(const CodeSpec& spec);

struct Perturbation {
    BitVector bits;
    std::vector<std::size_t> cleared;  // ascending
};

/// Clears round(rate * weight(prototype)) distinct ones of the prototype,
/// chosen uniformly. Zeros are never set.
Perturbation perturb_prototype(const BitVector& prototype, double rate, Rng& rng);

/// Random fill over the L_x - block_length non-prototype positions with
/// exactly `random_weight` ones.
BitVector make_random_fill(const CodeSpec& spec, Rng& rng);

/// Copies `fill` into the positions of a codeword outside the block of
/// `class_id`, in order.
void place_fill(BitVector& codeword, const BitVector& fill, const CodeSpec& spec, std::size_t class_id);

/// Rejection-sampled distributed output codewords (see constants above).
std::vector<BitVector> make_distributed_targets(std::size_t num_classes, Rng& rng);
std::vector<BitVector> make_one_hot_targets(std::size_t num_classes);

/// Builds the full code. Classes are assigned round-robin; a duplicate
/// codeword is redrawn up to kMaxDuplicateRetries times before a
/// GenerationError.
Dataset generate_dataset(const CodeSpec& spec, OutputCoding coding, Rng& rng);

/// Same as above with the generator seeded from spec.seed.
Dataset generate_dataset(const CodeSpec& spec, OutputCoding coding);

struct DistanceAudit {
    std::optional<std::pair<std::size_t, std::size_t>> within_class;
    std::optional<std::pair<std::size_t, std::size_t>> between_class;
    bool overlap = false;
};

/// Min/max Hamming distance over all same-class and all cross-class pairs.
DistanceAudit distance_audit(const Dataset& dataset);

}  // namespace localcodes
