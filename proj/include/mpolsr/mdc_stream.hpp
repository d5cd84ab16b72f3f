// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "mpolsr/mojette.hpp"
#include "mpolsr/rational.hpp"

namespace mpolsr {

struct OriginalPacketMeta {
  std::uint64_t sequence = 0;
  SimTime created_at;
  std::size_t payload_bytes = 0;
};

/// Shared by the N description packets of one group: which originals went
/// in, and their concatenated bytes (kept so the receiving end can verify
/// the rebuilt group bit for bit).
struct GroupInfo {
  std::uint64_t group_id = 0;
  std::vector<OriginalPacketMeta> originals;
  std::vector<std::uint8_t> group_payload;
};

struct EncodedDescription {
  Description description;
  std::uint32_t index = 0;  // description index within the group
  std::shared_ptr<const GroupInfo> group;

  /// Field-level accounting: fixed header plus two bytes per bin.
  [[nodiscard]] std::size_t wire_size() const { return 12 + 2 * description.bins.size(); }
};

struct DecodedGroup {
  std::uint64_t group_id = 0;
  std::vector<OriginalPacketMeta> originals;
  std::vector<std::uint8_t> payload;
};

/// Sending buffer: original payloads accumulate until the group is full
/// (or the owner flushes a stalled group), then the whole group is encoded
/// into N descriptions at once.
class MdcSendBuffer {
 public:
  MdcSendBuffer(CodecConfig config, std::size_t group_size) : config_(std::move(config)), group_size_(group_size) {
    if (group_size_ < 1) throw std::invalid_argument("group_size must be >= 1");
  }

  /// Returns the encoded group when this payload completes it.
  std::optional<std::vector<EncodedDescription>> add(const OriginalPacketMeta& meta,
                                                     std::vector<std::uint8_t> payload);

  /// Encodes a partial group, if `group_id` is still the open one.
  std::optional<std::vector<EncodedDescription>> flush(std::uint64_t group_id);

  [[nodiscard]] std::uint64_t open_group_id() const { return next_group_id_; }
  [[nodiscard]] std::size_t pending_count() const { return pending_.size(); }

 private:
  std::vector<EncodedDescription> emit();

  CodecConfig config_;
  std::size_t group_size_;
  std::uint64_t next_group_id_ = 0;
  std::vector<OriginalPacketMeta> pending_;
  std::vector<std::uint8_t> pending_payload_;
};

/// Receiver side: groups decode the moment M distinct descriptions have
/// arrived; later copies of an already-decoded group are ignored.
class MdcReassembler {
 public:
  explicit MdcReassembler(CodecConfig config) : config_(std::move(config)) {}

  std::optional<DecodedGroup> add(const EncodedDescription& description);

 private:
  struct PartialGroup {
    std::set<std::uint32_t> indices;
    std::vector<Description> descriptions;
    std::shared_ptr<const GroupInfo> group;
  };
  CodecConfig config_;
  std::map<std::uint64_t, PartialGroup> partial_;
  std::set<std::uint64_t> decoded_;
};

}  // namespace mpolsr
