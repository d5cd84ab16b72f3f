// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpolsr {

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientDescriptions : DecodeError {
  using DecodeError::DecodeError;
};
struct CorruptDescription : DecodeError {
  using DecodeError::DecodeError;
};

/// (N, M) threshold configuration: N projection directions (p, 1) with
/// pairwise distinct p, any M of which rebuild the payload exactly.
struct CodecConfig {
  int n_descriptions = 4;
  int m_required = 2;
  std::vector<int> projection_dirs;  // one p per description, q fixed at 1

  void validate() const;

  /// The N directions of smallest magnitude, positive first on ties:
  /// 0, 1, -1, 2, -2, ... Small |p| keeps the overhang-bin overhead low.
  static CodecConfig with_default_dirs(int n, int m);
};

/// Payload packed into a Q x P rectangle of 16-bit symbols, Q = M, padded
/// with zero bytes up to the rectangle size.
struct Block {
  int rows = 0;  // Q
  int cols = 0;  // P
  std::vector<std::uint16_t> symbols;  // row-major, rows*cols entries
  std::size_t pad_len = 0;

  [[nodiscard]] std::uint16_t at(int col, int row) const {
    return symbols[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col)];
  }
};

/// One Mojette projection of a block: line sums along direction (p, 1).
/// Bin b collects every symbol (k, l) with b = k + p*l - min(0, p*(Q-1)),
/// so there are exactly P + (Q-1)*|p| bins and their sum equals the symbol
/// sum. Bins are plain integer sums; nothing is reduced modulo anything.
struct Description {
  std::uint64_t group_id = 0;
  int p = 0;
  int cols = 0;  // P
  int rows = 0;  // Q
  std::size_t pad_len = 0;
  std::vector<std::int64_t> bins;

  [[nodiscard]] std::size_t expected_bin_count() const {
    return static_cast<std::size_t>(cols) + static_cast<std::size_t>(rows - 1) * static_cast<std::size_t>(p < 0 ? -p : p);
  }
};

/// Splits a payload into 16-bit symbols and shapes them into an m-row block.
Block make_block(std::span<const std::uint8_t> payload, int m);

/// Inverse of make_block: symbols back to bytes with the padding stripped.
std::vector<std::uint8_t> unmake_block(const Block& block);

Description project(const Block& block, int p);

/// One description per configured direction, all over the same block.
std::vector<Description> encode(std::span<const std::uint8_t> payload, const CodecConfig& config,
                                std::uint64_t group_id = 0);

/// Corner-based inversion: repeatedly solve a bin whose projection line
/// crosses exactly one unknown symbol and subtract it everywhere. Any M
/// distinct directions with q = 1 satisfy the Q <= sum(q_i) sufficiency
/// condition for a Q-row block, so the sweep always completes on intact
/// input. Throws InsufficientDescriptions below the threshold and
/// CorruptDescription when the sums contradict each other.
std::vector<std::uint8_t> decode(std::span<const Description> descriptions, const CodecConfig& config);

}  // namespace mpolsr
