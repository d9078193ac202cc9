// src/feature_io.cc

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

#include "mcsv/feature_io.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>

#include "mcsv/errors.h"

namespace mcsv {

namespace bytes {

void PutU8(std::vector<unsigned char> *out, std::uint8_t v) { out->push_back(v); }

void PutU16(std::vector<unsigned char> *out, std::uint16_t v) {
  out->push_back(static_cast<unsigned char>(v & 0xFF));
  out->push_back(static_cast<unsigned char>(v >> 8));
}

void PutU32(std::vector<unsigned char> *out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8)
    out->push_back(static_cast<unsigned char>((v >> s) & 0xFF));
}

void PutF32(std::vector<unsigned char> *out, float v) {
  PutU32(out, std::bit_cast<std::uint32_t>(v));
}

void Reader::Need(std::size_t n) const {
  Require(remaining() >= n, ErrorCode::kTruncated,
          "container truncated: need " + std::to_string(n) + " bytes, have " +
              std::to_string(remaining()));
}

std::uint8_t Reader::U8() {
  Need(1);
  return data_[pos_++];
}

std::uint16_t Reader::U16() {
  Need(2);
  auto v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t Reader::U32() {
  Need(4);
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | data_[pos_ + k];
  pos_ += 4;
  return v;
}

float Reader::F32() { return std::bit_cast<float>(U32()); }

std::string Reader::String(std::size_t len) {
  Need(len);
  std::string s(reinterpret_cast<const char *>(data_.data() + pos_), len);
  pos_ += len;
  return s;
}

}  // namespace bytes

void FeatureStack::Append(const FeaturePlane &plane) {
  Require(plane.label().size() <= std::numeric_limits<std::uint8_t>::max(),
          ErrorCode::kDimensionOverflow, "plane label longer than 255 bytes");
  StackPlane sp{plane.label(), plane.width(), {}};
  sp.values.reserve(plane.data().size());
  for (double v : plane.data()) sp.values.push_back(static_cast<float>(v));
  if (planes_.empty() && num_frames_ == 0) num_frames_ = plane.num_frames();
  Require(plane.num_frames() == num_frames_, ErrorCode::kSize,
          "plane '" + plane.label() + "' has " +
              std::to_string(plane.num_frames()) + " frames, stack has " +
              std::to_string(num_frames_));
  planes_.push_back(std::move(sp));
}

void FeatureStack::Append(StackPlane plane) {
  Require(plane.label.size() <= std::numeric_limits<std::uint8_t>::max(),
          ErrorCode::kDimensionOverflow, "plane label longer than 255 bytes");
  Require(plane.values.size() == plane.width * num_frames_, ErrorCode::kSize,
          "plane '" + plane.label + "' does not match the stack frame count");
  planes_.push_back(std::move(plane));
}

FeaturePlane FeatureStack::ToFeaturePlane(std::size_t k) const {
  const StackPlane &sp = planes_.at(k);
  FeaturePlane out(sp.label, num_frames_, sp.width);
  auto data = out.data();
  for (std::size_t n = 0; n < sp.values.size(); ++n) data[n] = sp.values[n];
  return out;
}

std::vector<unsigned char> EncodeFeatureStack(const FeatureStack &stack) {
  using namespace bytes;
  Require(stack.num_planes() <= std::numeric_limits<std::uint16_t>::max(),
          ErrorCode::kDimensionOverflow, "too many planes for MCFT");
  Require(stack.num_frames() <= std::numeric_limits<std::uint32_t>::max(),
          ErrorCode::kDimensionOverflow, "too many frames for MCFT");
  std::vector<unsigned char> out(kFeatureMagic, kFeatureMagic + 4);
  PutU16(&out, kFeatureVersion);
  PutU16(&out, static_cast<std::uint16_t>(stack.num_planes()));
  PutU32(&out, static_cast<std::uint32_t>(stack.num_frames()));
  for (const StackPlane &p : stack.planes()) {
    Require(p.label.size() <= std::numeric_limits<std::uint8_t>::max(),
            ErrorCode::kDimensionOverflow, "plane label longer than 255 bytes");
    Require(p.width <= std::numeric_limits<std::uint16_t>::max(),
            ErrorCode::kDimensionOverflow, "plane wider than 65535");
    PutU8(&out, static_cast<std::uint8_t>(p.label.size()));
    out.insert(out.end(), p.label.begin(), p.label.end());
    PutU16(&out, static_cast<std::uint16_t>(p.width));
  }
  for (const StackPlane &p : stack.planes())
    for (float v : p.values) PutF32(&out, v);
  return out;
}

FeatureStack DecodeFeatureStack(std::span<const unsigned char> data) {
  bytes::Reader in(data);
  Require(data.size() >= 4 && std::memcmp(data.data(), kFeatureMagic, 4) == 0,
          ErrorCode::kBadMagic, "not an MCFT container (bad magic)");
  in.String(4);
  std::uint16_t version = in.U16();
  Require(version == kFeatureVersion, ErrorCode::kUnsupportedVersion,
          "unsupported MCFT version " + std::to_string(version));
  std::uint16_t planes = in.U16();
  std::uint32_t frames = in.U32();
  std::vector<std::pair<std::string, std::size_t>> header;
  std::uint64_t total_values = 0;
  for (std::uint16_t k = 0; k < planes; ++k) {
    std::uint8_t label_len = in.U8();
    std::string label = in.String(label_len);
    std::uint16_t width = in.U16();
    const std::uint64_t count = static_cast<std::uint64_t>(width) * frames;
    Require(total_values <= std::numeric_limits<std::uint64_t>::max() / 4 - count,
            ErrorCode::kDimensionOverflow, "MCFT payload size overflows");
    total_values += count;
    header.emplace_back(std::move(label), width);
  }
  Require(total_values <= std::numeric_limits<std::size_t>::max() / 4,
          ErrorCode::kDimensionOverflow, "MCFT payload size overflows");
  Require(in.remaining() >= total_values * 4, ErrorCode::kTruncated,
          "MCFT header declares " + std::to_string(total_values * 4) +
              " payload bytes, file has " + std::to_string(in.remaining()));
  FeatureStack stack(frames);
  for (auto &[label, width] : header) {
    StackPlane p{label, width, std::vector<float>(width * frames)};
    for (float &v : p.values) v = in.F32();
    stack.Append(std::move(p));
  }
  Require(in.remaining() == 0, ErrorCode::kTrailingData,
          "MCFT container has trailing bytes");
  return stack;
}

std::vector<unsigned char> ReadBinaryFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteBinaryFileAtomic(const std::string &path,
                           std::span<const unsigned char> data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    Require(os.good(), ErrorCode::kIo, "cannot write '" + tmp + "'");
    os.write(reinterpret_cast<const char *>(data.data()),
             static_cast<std::streamsize>(data.size()));
    Require(os.good(), ErrorCode::kIo, "write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  Require(!ec, ErrorCode::kIo, "cannot rename '" + tmp + "': " + ec.message());
}

void WriteFeatureFile(const FeatureStack &stack, const std::string &path) {
  WriteBinaryFileAtomic(path, EncodeFeatureStack(stack));
}

FeatureStack ReadFeatureFile(const std::string &path) {
  try {
    return DecodeFeatureStack(ReadBinaryFile(path));
  } catch (const Error &e) {
    throw Error(e.code(), "'" + path + "': " + e.what());
  }
}

}  // namespace mcsv
