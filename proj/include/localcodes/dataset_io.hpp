#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "localcodes/codegen.hpp"

namespace localcodes {

// Dataset file, version 1. All integers little-endian.
//
//   "LCDS" u32 format_version
//   u64 codeword_length, num_classes, num_codewords, random_weight
//   f64 perturbation_rate, u64 seed, u8 output_coding (0 distributed, 1 one_hot)
//   u64 output_length
//   num_codewords x packed codeword bits (ceil(L_x / 8) bytes each)
//   num_codewords x u32 class id
//   num_classes x packed output target bits
//   num_codewords x (u32 n, n x u32 cleared position)
inline constexpr std::uint32_t kDatasetFormatVersion = 1;

std::vector<std::uint8_t> encode_dataset(const Dataset& dataset);
Dataset decode_dataset(const std::vector<std::uint8_t>& bytes, const std::string& source = "dataset");

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Human-readable export: codewords and targets as 0/1 arrays.
std::string dataset_to_json(const Dataset& dataset);

}  // namespace localcodes
