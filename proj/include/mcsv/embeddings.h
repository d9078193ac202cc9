// include/mcsv/embeddings.h

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

#ifndef MCSV_EMBEDDINGS_H_
#define MCSV_EMBEDDINGS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mcsv {

// Rows of fixed-width float embeddings with speaker and utterance ids.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(std::size_t width = 512) : width_(width) {}

  std::size_t width() const { return width_; }
  std::size_t size() const { return speakers_.size(); }

  void Add(std::span<const float> row, std::string speaker,
           std::string utterance);
  std::span<const float> Row(std::size_t r) const {
    return {values_.data() + r * width_, width_};
  }
  const std::string &speaker(std::size_t r) const { return speakers_.at(r); }
  const std::string &utterance(std::size_t r) const { return utterances_.at(r); }
  const std::vector<std::string> &speakers() const { return speakers_; }
  const std::vector<std::string> &utterances() const { return utterances_; }
  const std::vector<float> &values() const { return values_; }

  bool operator==(const EmbeddingSet &) const = default;

 private:
  std::size_t width_;
  std::vector<float> values_;
  std::vector<std::string> speakers_;
  std::vector<std::string> utterances_;
};

// Container layout, little-endian:
//   "MCEB" | u16 version=1 | u32 rows | u16 width | float32 rows |
//   per row: u16 len + speaker id, u16 len + utterance id.
inline constexpr char kEmbeddingMagic[4] = {'M', 'C', 'E', 'B'};
inline constexpr std::uint16_t kEmbeddingVersion = 1;

std::vector<unsigned char> EncodeEmbeddings(const EmbeddingSet &set);
EmbeddingSet DecodeEmbeddings(std::span<const unsigned char> bytes);
void WriteEmbeddingFile(const EmbeddingSet &set, const std::string &path);
EmbeddingSet ReadEmbeddingFile(const std::string &path);

}  // namespace mcsv

#endif  // MCSV_EMBEDDINGS_H_
