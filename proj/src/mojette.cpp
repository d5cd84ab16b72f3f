// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/mojette.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace mpolsr {

namespace {

// Bin index of cell (col, row) in direction p for a rows-row block.
inline std::size_t bin_index(int col, int row, int p, int rows) {
  const int offset = -std::min(0, p * (rows - 1));
  return static_cast<std::size_t>(col + p * row + offset);
}

}  // namespace

void CodecConfig::validate() const {
  if (n_descriptions < 1) throw std::invalid_argument("n_descriptions must be >= 1");
  if (m_required < 1 || m_required > n_descriptions)
    throw std::invalid_argument("m_required must satisfy 0 < M <= N");
  if (static_cast<int>(projection_dirs.size()) != n_descriptions)
    throw std::invalid_argument("need exactly one projection direction per description");
  const std::set<int> distinct(projection_dirs.begin(), projection_dirs.end());
  if (static_cast<int>(distinct.size()) != n_descriptions)
    throw std::invalid_argument("projection directions must be pairwise distinct");
}

CodecConfig CodecConfig::with_default_dirs(int n, int m) {
  CodecConfig config;
  config.n_descriptions = n;
  config.m_required = m;
  int magnitude = 0;
  while (static_cast<int>(config.projection_dirs.size()) < n) {
    if (magnitude == 0) {
      config.projection_dirs.push_back(0);
    } else {
      config.projection_dirs.push_back(magnitude);
      if (static_cast<int>(config.projection_dirs.size()) < n) config.projection_dirs.push_back(-magnitude);
    }
    ++magnitude;
  }
  config.validate();
  return config;
}

Block make_block(std::span<const std::uint8_t> payload, int m) {
  if (payload.empty()) throw std::invalid_argument("make_block on empty payload");
  if (m < 1) throw std::invalid_argument("block row count must be >= 1");

  const std::size_t symbol_count = (payload.size() + 1) / 2;
  const std::size_t cols = (symbol_count + static_cast<std::size_t>(m) - 1) / static_cast<std::size_t>(m);

  Block block;
  block.rows = m;
  block.cols = static_cast<int>(cols);
  block.symbols.assign(static_cast<std::size_t>(m) * cols, 0);
  block.pad_len = static_cast<std::size_t>(m) * cols * 2 - payload.size();

  for (std::size_t i = 0; i < payload.size(); ++i) {
    // Big-endian byte pairs: byte 2s is the high half of symbol s.
    const std::size_t sym = i / 2;
    if (i % 2 == 0)
      block.symbols[sym] = static_cast<std::uint16_t>(payload[i] << 8);
    else
      block.symbols[sym] = static_cast<std::uint16_t>(block.symbols[sym] | payload[i]);
  }
  return block;
}

std::vector<std::uint8_t> unmake_block(const Block& block) {
  const std::size_t total_bytes = block.symbols.size() * 2;
  if (block.pad_len > total_bytes) throw std::invalid_argument("pad length exceeds block size");
  const std::size_t payload_len = total_bytes - block.pad_len;

  std::vector<std::uint8_t> out(payload_len);
  for (std::size_t i = 0; i < payload_len; ++i) {
    const std::uint16_t sym = block.symbols[i / 2];
    out[i] = (i % 2 == 0) ? static_cast<std::uint8_t>(sym >> 8) : static_cast<std::uint8_t>(sym & 0xff);
  }
  return out;
}

Description project(const Block& block, int p) {
  Description desc;
  desc.p = p;
  desc.cols = block.cols;
  desc.rows = block.rows;
  desc.pad_len = block.pad_len;
  desc.bins.assign(desc.expected_bin_count(), 0);
  for (int row = 0; row < block.rows; ++row)
    for (int col = 0; col < block.cols; ++col)
      desc.bins[bin_index(col, row, p, block.rows)] += block.at(col, row);
  return desc;
}

std::vector<Description> encode(std::span<const std::uint8_t> payload, const CodecConfig& config,
                                std::uint64_t group_id) {
  config.validate();
  const Block block = make_block(payload, config.m_required);
  std::vector<Description> out;
  out.reserve(config.projection_dirs.size());
  for (int p : config.projection_dirs) {
    Description desc = project(block, p);
    desc.group_id = group_id;
    out.push_back(std::move(desc));
  }
  return out;
}

std::vector<std::uint8_t> decode(std::span<const Description> descriptions, const CodecConfig& config) {
  config.validate();

  // Distinct directions only; duplicates add nothing.
  std::vector<const Description*> used;
  std::set<int> seen_dirs;
  for (const Description& d : descriptions) {
    if (seen_dirs.insert(d.p).second) used.push_back(&d);
  }
  if (static_cast<int>(used.size()) < config.m_required)
    throw InsufficientDescriptions("need at least M distinct descriptions to rebuild the group");

  const Description& first = *used.front();
  const int rows = first.rows;
  const int cols = first.cols;
  for (const Description* d : used) {
    if (d->rows != rows || d->cols != cols || d->group_id != first.group_id || d->pad_len != first.pad_len)
      throw CorruptDescription("descriptions disagree on block geometry");
    if (d->bins.size() != d->expected_bin_count()) throw CorruptDescription("bin vector has the wrong length");
  }

  const std::size_t cell_count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<std::int64_t> residual;           // all descriptions' bins, concatenated
  std::vector<int> unknown_in_bin;              // unknown-cell count per bin
  std::vector<std::size_t> bin_base(used.size());
  for (std::size_t d = 0; d < used.size(); ++d) {
    bin_base[d] = residual.size();
    residual.insert(residual.end(), used[d]->bins.begin(), used[d]->bins.end());
    unknown_in_bin.insert(unknown_in_bin.end(), used[d]->bins.size(), 0);
  }
  for (std::size_t d = 0; d < used.size(); ++d)
    for (int row = 0; row < rows; ++row)
      for (int col = 0; col < cols; ++col) ++unknown_in_bin[bin_base[d] + bin_index(col, row, used[d]->p, rows)];

  Block block;
  block.rows = rows;
  block.cols = cols;
  block.pad_len = first.pad_len;
  block.symbols.assign(cell_count, 0);
  std::vector<bool> known(cell_count, false);

  std::deque<std::pair<std::size_t, std::size_t>> worklist;  // (description index, local bin)
  for (std::size_t d = 0; d < used.size(); ++d)
    for (std::size_t b = 0; b < used[d]->bins.size(); ++b)
      if (unknown_in_bin[bin_base[d] + b] == 1) worklist.emplace_back(d, b);

  std::size_t solved = 0;
  while (!worklist.empty()) {
    const auto [d, b] = worklist.front();
    worklist.pop_front();
    if (unknown_in_bin[bin_base[d] + b] != 1) continue;  // already drained

    // Locate the single unknown cell on this projection line.
    const int p = used[d]->p;
    int found_col = -1;
    int found_row = -1;
    for (int row = 0; row < rows; ++row) {
      const int offset = -std::min(0, p * (rows - 1));
      const int col = static_cast<int>(b) - p * row - offset;
      if (col < 0 || col >= cols) continue;
      if (!known[static_cast<std::size_t>(row) * cols + col]) {
        found_col = col;
        found_row = row;
        break;
      }
    }
    if (found_col < 0) throw CorruptDescription("inversion bookkeeping contradicts the bins");

    const std::int64_t value = residual[bin_base[d] + b];
    if (value < 0 || value > 0xffff) throw CorruptDescription("bin residue outside the symbol range");

    const std::size_t cell = static_cast<std::size_t>(found_row) * cols + found_col;
    block.symbols[cell] = static_cast<std::uint16_t>(value);
    known[cell] = true;
    ++solved;

    for (std::size_t other = 0; other < used.size(); ++other) {
      const std::size_t ob = bin_base[other] + bin_index(found_col, found_row, used[other]->p, rows);
      residual[ob] -= value;
      if (--unknown_in_bin[ob] == 1) worklist.emplace_back(other, ob - bin_base[other]);
      if (unknown_in_bin[ob] == 0 && residual[ob] != 0)
        throw CorruptDescription("nonzero residue on a fully solved projection line");
    }
  }

  if (solved != cell_count)
    throw CorruptDescription("inversion stalled before every symbol was recovered");
  return unmake_block(block);
}

}  // namespace mpolsr
