// Copyright (c) mpolsr-sim contributors.
// SPDX-License-Identifier: Apache-2.0
#include "mpolsr/mdc_stream.hpp"

namespace mpolsr {

std::optional<std::vector<EncodedDescription>> MdcSendBuffer::add(const OriginalPacketMeta& meta,
                                                                  std::vector<std::uint8_t> payload) {
  pending_.push_back(meta);
  pending_payload_.insert(pending_payload_.end(), payload.begin(), payload.end());
  if (pending_.size() < group_size_) return std::nullopt;
  return emit();
}

std::optional<std::vector<EncodedDescription>> MdcSendBuffer::flush(std::uint64_t group_id) {
  if (group_id != next_group_id_ || pending_.empty()) return std::nullopt;
  return emit();
}

std::vector<EncodedDescription> MdcSendBuffer::emit() {
  auto info = std::make_shared<GroupInfo>();
  info->group_id = next_group_id_++;
  info->originals = std::move(pending_);
  info->group_payload = std::move(pending_payload_);
  pending_.clear();
  pending_payload_.clear();

  std::vector<Description> descriptions = encode(info->group_payload, config_, info->group_id);
  std::vector<EncodedDescription> out;
  out.reserve(descriptions.size());
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    EncodedDescription enc;
    enc.description = std::move(descriptions[i]);
    enc.index = static_cast<std::uint32_t>(i);
    enc.group = info;
    out.push_back(std::move(enc));
  }
  return out;
}

std::optional<DecodedGroup> MdcReassembler::add(const EncodedDescription& description) {
  const std::uint64_t gid = description.description.group_id;
  if (decoded_.count(gid) != 0) return std::nullopt;

  PartialGroup& partial = partial_[gid];
  if (!partial.indices.insert(description.index).second) return std::nullopt;  // duplicate copy
  partial.descriptions.push_back(description.description);
  partial.group = description.group;

  if (partial.descriptions.size() < static_cast<std::size_t>(config_.m_required)) return std::nullopt;

  DecodedGroup group;
  group.group_id = gid;
  group.originals = partial.group->originals;
  group.payload = decode(partial.descriptions, config_);
  if (group.payload != partial.group->group_payload)
    throw CorruptDescription("rebuilt group does not match the transmitted payload");

  decoded_.insert(gid);
  partial_.erase(gid);
  return group;
}

}  // namespace mpolsr
