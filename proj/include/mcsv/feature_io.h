// include/mcsv/feature_io.h

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

#ifndef MCSV_FEATURE_IO_H_
#define MCSV_FEATURE_IO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcsv/signal.h"

namespace mcsv {

// A plane as stored on disk: float32, frame-major.
struct StackPlane {
  std::string label;
  std::size_t width = 0;
  std::vector<float> values;

  bool operator==(const StackPlane &) const = default;
};

// Planes concatenated along the channel axis, all sharing one frame count.
class FeatureStack {
 public:
  explicit FeatureStack(std::size_t num_frames = 0) : num_frames_(num_frames) {}

  std::size_t num_frames() const { return num_frames_; }
  std::size_t num_planes() const { return planes_.size(); }
  const std::vector<StackPlane> &planes() const { return planes_; }
  const StackPlane &plane(std::size_t k) const { return planes_.at(k); }

  // Throws kSize when the frame count disagrees with the stack.
  void Append(const FeaturePlane &plane);
  void Append(StackPlane plane);
  // Copy of a plane back in double precision.
  FeaturePlane ToFeaturePlane(std::size_t k) const;

  bool operator==(const FeatureStack &) const = default;

 private:
  std::size_t num_frames_;
  std::vector<StackPlane> planes_;
};

// Container layout, little-endian:
//   "MCFT" | u16 version=1 | u16 planes | u32 frames |
//   per plane: u8 label_len, label bytes, u16 width |
//   float32 payload, plane-major, frame-major within a plane.
inline constexpr char kFeatureMagic[4] = {'M', 'C', 'F', 'T'};
inline constexpr std::uint16_t kFeatureVersion = 1;

std::vector<unsigned char> EncodeFeatureStack(const FeatureStack &stack);
// Errors: kBadMagic, kUnsupportedVersion, kTruncated, kDimensionOverflow,
// kTrailingData.
FeatureStack DecodeFeatureStack(std::span<const unsigned char> bytes);

void WriteFeatureFile(const FeatureStack &stack, const std::string &path);
FeatureStack ReadFeatureFile(const std::string &path);

// Little-endian primitives shared by the binary containers.
namespace bytes {
void PutU8(std::vector<unsigned char> *out, std::uint8_t v);
void PutU16(std::vector<unsigned char> *out, std::uint16_t v);
void PutU32(std::vector<unsigned char> *out, std::uint32_t v);
void PutF32(std::vector<unsigned char> *out, float v);

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> data) : data_(data) {}
  std::uint8_t U8();
  std::uint16_t U16();
  std::uint32_t U32();
  float F32();
  std::string String(std::size_t len);
  std::size_t remaining() const { return data_.size() - pos_; }
  // kTruncated unless n more bytes are available.
  void Need(std::size_t n) const;

 private:
  std::span<const unsigned char> data_;
  std::size_t pos_ = 0;
};
}  // namespace bytes

std::vector<unsigned char> ReadBinaryFile(const std::string &path);
// Writes to `path`.tmp then renames over `path`.
void WriteBinaryFileAtomic(const std::string &path,
                           std::span<const unsigned char> data);

}  // namespace mcsv

#endif  // MCSV_FEATURE_IO_H_
