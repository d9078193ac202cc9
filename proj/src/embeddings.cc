// src/embeddings.cc

// Copyright 2026 The mcsv Authors

// See COPYING at the top of the tree for clarification regarding multiple
// authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "mcsv/embeddings.h"

#include <cstring>
#include <limits>

#include "mcsv/errors.h"
#include "mcsv/feature_io.h"

namespace mcsv {

void EmbeddingSet::Add(std::span<const float> row, std::string speaker,
                       std::string utterance) {
  Require(row.size() == width_, ErrorCode::kSize,
          "embedding row is " + std::to_string(row.size()) + " wide, set is " +
              std::to_string(width_));
  Require(!speaker.empty() && !utterance.empty(), ErrorCode::kValidation,
          "embedding ids must be nonempty");
  values_.insert(values_.end(), row.begin(), row.end());
  speakers_.push_back(std::move(speaker));
  utterances_.push_back(std::move(utterance));
}

std::vector<unsigned char> EncodeEmbeddings(const EmbeddingSet &set) {
  using namespace bytes;
  Require(set.size() <= std::numeric_limits<std::uint32_t>::max() &&
              set.width() <= std::numeric_limits<std::uint16_t>::max(),
          ErrorCode::kDimensionOverflow, "embedding set too large for MCEB");
  std::vector<unsigned char> out(kEmbeddingMagic, kEmbeddingMagic + 4);
  PutU16(&out, kEmbeddingVersion);
  PutU32(&out, static_cast<std::uint32_t>(set.size()));
  PutU16(&out, static_cast<std::uint16_t>(set.width()));
  for (float v : set.values()) PutF32(&out, v);
  for (std::size_t r = 0; r < set.size(); ++r) {
    for (const std::string *id : {&set.speaker(r), &set.utterance(r)}) {
      Require(id->size() <= std::numeric_limits<std::uint16_t>::max(),
              ErrorCode::kDimensionOverflow, "embedding id too long");
      PutU16(&out, static_cast<std::uint16_t>(id->size()));
      out.insert(out.end(), id->begin(), id->end());
    }
  }
  return out;
}

EmbeddingSet DecodeEmbeddings(std::span<const unsigned char> data) {
  bytes::Reader in(data);
  Require(data.size() >= 4 && std::memcmp(data.data(), kEmbeddingMagic, 4) == 0,
          ErrorCode::kBadMagic, "not an MCEB container (bad magic)");
  in.String(4);
  std::uint16_t version = in.U16();
  Require(version == kEmbeddingVersion, ErrorCode::kUnsupportedVersion,
          "unsupported MCEB version " + std::to_string(version));
  const std::uint32_t rows = in.U32();
  const std::uint16_t width = in.U16();
  const std::uint64_t payload = static_cast<std::uint64_t>(rows) * width * 4;
  Require(in.remaining() >= payload, ErrorCode::kTruncated,
          "MCEB header declares " + std::to_string(payload) +
              " payload bytes, file has " + std::to_string(in.remaining()));
  std::vector<float> values(static_cast<std::size_t>(rows) * width);
  for (float &v : values) v = in.F32();
  EmbeddingSet set(width);
  for (std::uint32_t r = 0; r < rows; ++r) {
    std::string speaker = in.String(in.U16());
    std::string utterance = in.String(in.U16());
    set.Add(std::span<const float>(values.data() + std::size_t{r} * width, width),
            std::move(speaker), std::move(utterance));
  }
  Require(in.remaining() == 0, ErrorCode::kTrailingData,
          "MCEB container has trailing bytes");
  return set;
}

void WriteEmbeddingFile(const EmbeddingSet &set, const std::string &path) {
  WriteBinaryFileAtomic(path, EncodeEmbeddings(set));
}

EmbeddingSet ReadEmbeddingFile(const std::string &path) {
  try {
    return DecodeEmbeddings(ReadBinaryFile(path));
  } catch (const Error &e) {
    throw Error(e.code(), "'" + path + "': " + e.what());
  }
}

}  // namespace mcsv
