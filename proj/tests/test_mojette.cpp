// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>

#include "mpolsr/mdc_stream.hpp"
#include "mpolsr/mojette.hpp"
#include "mpolsr/rng.hpp"

using namespace mpolsr;

namespace {

std::vector<std::uint8_t> random_payload(DeterministicRng& rng, std::size_t max_len = 64) {
  const std::size_t len = 1 + rng.uniform_int(max_len);
  std::vector<std::uint8_t> out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.uniform_int(256));
  return out;
}

// Rows given top to bottom, e.g. {{1, 2}, {3, 4}}.
Block block_from_rows(const std::vector<std::vector<std::uint16_t>>& rows) {
  Block block;
  block.rows = static_cast<int>(rows.size());
  block.cols = static_cast<int>(rows.front().size());
  for (const auto& row : rows) block.symbols.insert(block.symbols.end(), row.begin(), row.end());
  block.pad_len = 0;
  return block;
}

std::int64_t symbol_sum(const Block& block) {
  return std::accumulate(block.symbols.begin(), block.symbols.end(), std::int64_t{0});
}

std::int64_t bin_sum(const Description& desc) {
  return std::accumulate(desc.bins.begin(), desc.bins.end(), std::int64_t{0});
}

}  // namespace

TEST_CASE("blocks shape payloads into m rows with recorded padding") {
  const std::vector<std::uint8_t> eight{1, 2, 3, 4, 5, 6, 7, 8};
  const Block b8 = make_block(eight, 2);
  CHECK(b8.rows == 2);
  CHECK(b8.cols == 2);
  CHECK(b8.pad_len == 0);

  const std::vector<std::uint8_t> seven{1, 2, 3, 4, 5, 6, 7};
  const Block b7 = make_block(seven, 2);
  CHECK(b7.rows == 2);
  CHECK(b7.cols == 2);
  CHECK(b7.pad_len == 1);

  const std::vector<std::uint8_t> empty;
  CHECK_THROWS_AS(make_block(empty, 2), std::invalid_argument);
}

TEST_CASE("unmake inverts make for arbitrary payloads") {
  DeterministicRng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto payload = random_payload(rng, 100);
    const int m = 1 + static_cast<int>(rng.uniform_int(5));
    CHECK(unmake_block(make_block(payload, m)) == payload);
  }
}

TEST_CASE("projections of the 2x2 sample block") {
  const Block block = block_from_rows({{1, 2}, {3, 4}});
  CHECK(project(block, 0).bins == std::vector<std::int64_t>{4, 6});
  CHECK(project(block, 1).bins == std::vector<std::int64_t>{1, 5, 4});
  CHECK(project(block, -1).bins == std::vector<std::int64_t>{3, 5, 2});
}

TEST_CASE("bin count and mass conservation over random blocks") {
  DeterministicRng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto payload = random_payload(rng);
    const int m = 1 + static_cast<int>(rng.uniform_int(4));
    const Block block = make_block(payload, m);
    const int p = static_cast<int>(rng.uniform_int(9)) - 4;
    const Description desc = project(block, p);
    CHECK(desc.bins.size() ==
          static_cast<std::size_t>(block.cols) + static_cast<std::size_t>(block.rows - 1) * std::abs(p));
    CHECK(bin_sum(desc) == symbol_sum(block));
  }
}

TEST_CASE("default direction set starts at zero and alternates") {
  const CodecConfig config = CodecConfig::with_default_dirs(5, 2);
  CHECK(config.projection_dirs == std::vector<int>{0, 1, -1, 2, -2});
}

TEST_CASE("config validation") {
  CodecConfig bad = CodecConfig::with_default_dirs(4, 2);
  bad.projection_dirs[1] = 0;  // duplicate
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(CodecConfig::with_default_dirs(2, 3), std::invalid_argument);
}

TEST_CASE("hand inversion of two projections") {
  // Corner bin of direction 1 isolates the bottom-right symbol; the rest
  // cascades through the column sums.
  const Block block = block_from_rows({{1, 2}, {3, 4}});
  const std::vector<std::uint8_t> payload = unmake_block(block);

  CodecConfig config;
  config.n_descriptions = 2;
  config.m_required = 2;
  config.projection_dirs = {0, 1};
  const auto descriptions = encode(payload, config);
  CHECK(decode(descriptions, config) == payload);
}

TEST_CASE("single copy configuration is a passthrough") {
  CodecConfig config;
  config.n_descriptions = 1;
  config.m_required = 1;
  config.projection_dirs = {0};
  const std::vector<std::uint8_t> payload{10, 20, 30, 40};
  const auto descriptions = encode(payload, config);
  REQUIRE(descriptions.size() == 1);
  // One row: the bins are the symbols themselves.
  CHECK(descriptions[0].bins == std::vector<std::int64_t>{0x0a14, 0x1e28});
  CHECK(decode(descriptions, config) == payload);
}

TEST_CASE("below-threshold subsets are refused") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  const std::vector<std::uint8_t> payload{9, 8, 7, 6, 5};
  const auto descriptions = encode(payload, config);
  for (const Description& d : descriptions) {
    const std::vector<Description> single{d};
    CHECK_THROWS_AS(decode(single, config), InsufficientDescriptions);
  }
  // The same description twice is still one direction.
  const std::vector<Description> twice{descriptions[0], descriptions[0]};
  CHECK_THROWS_AS(decode(twice, config), InsufficientDescriptions);
}

TEST_CASE("threshold property: every subset of size >= M rebuilds the payload") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  DeterministicRng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto payload = random_payload(rng, 128);
    const auto descriptions = encode(payload, config);
    for (unsigned mask = 1; mask < 16; ++mask) {
      std::vector<Description> subset;
      for (unsigned bit = 0; bit < 4; ++bit)
        if (mask & (1u << bit)) subset.push_back(descriptions[bit]);
      if (subset.size() >= 2) {
        CHECK(decode(subset, config) == payload);
      } else {
        CHECK_THROWS_AS(decode(subset, config), InsufficientDescriptions);
      }
    }
  }
}

TEST_CASE("exact threshold with N equal to M") {
  const CodecConfig config = CodecConfig::with_default_dirs(3, 3);
  DeterministicRng rng(4);
  const auto payload = random_payload(rng, 64);
  const auto descriptions = encode(payload, config);
  CHECK(decode(descriptions, config) == payload);
  std::vector<Description> missing_one(descriptions.begin(), descriptions.end() - 1);
  CHECK_THROWS_AS(decode(missing_one, config), InsufficientDescriptions);
}

TEST_CASE("tampered bins are detected") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  const std::vector<std::uint8_t> payload{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto descriptions = encode(payload, config);
  descriptions[1].bins[0] += 1;
  const std::vector<Description> subset{descriptions[0], descriptions[1]};
  CHECK_THROWS_AS(decode(subset, config), CorruptDescription);
}

TEST_CASE("send buffer groups payloads and tags descriptions") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  MdcSendBuffer buffer(config, 2);

  CHECK_FALSE(buffer.add({0, SimTime(0), 4}, {1, 2, 3, 4}).has_value());
  CHECK(buffer.pending_count() == 1);
  const auto group = buffer.add({1, SimTime(1), 4}, {5, 6, 7, 8});
  REQUIRE(group.has_value());
  REQUIRE(group->size() == 4);
  for (std::size_t i = 0; i < group->size(); ++i) {
    CHECK((*group)[i].index == i);
    CHECK((*group)[i].description.group_id == 0);
    CHECK((*group)[i].group->originals.size() == 2);
  }
  // Description payload is about 1/M of the group plus overhang bins.
  const std::size_t group_bytes = 8;
  for (const auto& desc : *group) {
    const std::size_t bins = desc.description.bins.size();
    const std::size_t overhang =
        static_cast<std::size_t>(desc.description.rows - 1) * std::abs(desc.description.p);
    CHECK(bins * 2 == group_bytes / 2 + overhang * 2);
  }
}

TEST_CASE("flush emits a short group and only for the open id") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  MdcSendBuffer buffer(config, 3);
  CHECK_FALSE(buffer.flush(0).has_value());  // nothing buffered yet
  buffer.add({0, SimTime(0), 2}, {1, 2});
  CHECK_FALSE(buffer.flush(7).has_value());  // stale flush token
  const auto group = buffer.flush(buffer.open_group_id());
  REQUIRE(group.has_value());
  CHECK((*group)[0].group->originals.size() == 1);
  CHECK(buffer.pending_count() == 0);
}

TEST_CASE("reassembler decodes once M distinct descriptions arrive") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  MdcSendBuffer buffer(config, 2);
  buffer.add({0, SimTime(0), 4}, {11, 12, 13, 14});
  const auto group = *buffer.add({1, SimTime(1), 4}, {15, 16, 17, 18});

  MdcReassembler reassembler(config);
  CHECK_FALSE(reassembler.add(group[0]).has_value());
  CHECK_FALSE(reassembler.add(group[0]).has_value());  // duplicate copy does not help
  const auto decoded = reassembler.add(group[3]);      // indices {0, 3}
  REQUIRE(decoded.has_value());
  CHECK(decoded->payload == std::vector<std::uint8_t>{11, 12, 13, 14, 15, 16, 17, 18});
  CHECK(decoded->originals.size() == 2);
  // Late descriptions of a decoded group are ignored.
  CHECK_FALSE(reassembler.add(group[1]).has_value());
}

TEST_CASE("passthrough grouping with N = M = 1") {
  CodecConfig config;
  config.n_descriptions = 1;
  config.m_required = 1;
  config.projection_dirs = {0};
  MdcSendBuffer buffer(config, 1);
  const auto group = buffer.add({0, SimTime(0), 3}, {1, 2, 3});
  REQUIRE(group.has_value());
  MdcReassembler reassembler(config);
  const auto decoded = reassembler.add((*group)[0]);
  REQUIRE(decoded.has_value());
  CHECK(decoded->payload == std::vector<std::uint8_t>{1, 2, 3});
}

TEST_CASE("size overhead stays near N over M") {
  const CodecConfig config = CodecConfig::with_default_dirs(4, 2);
  DeterministicRng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t len = 64 + rng.uniform_int(512);
    std::vector<std::uint8_t> payload(len, 0xab);
    const auto descriptions = encode(payload, config);
    std::size_t encoded = 0;
    for (const auto& d : descriptions) encoded += 2 * d.bins.size();
    const double ratio = static_cast<double>(encoded) / static_cast<double>(len);
    const double floor = 4.0 / 2.0;
    CHECK(ratio >= floor);
    CHECK(ratio <= floor + 0.5);  // overhang bins and rounding only
  }
}
