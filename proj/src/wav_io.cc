// src/wav_io.cc

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

#include "mcsv/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "mcsv/errors.h"

namespace mcsv {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t LoadU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t LoadU32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<unsigned char> *out, std::uint16_t v) {
  out->push_back(static_cast<unsigned char>(v & 0xFF));
  out->push_back(static_cast<unsigned char>(v >> 8));
}

void PutU32(std::vector<unsigned char> *out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8)
    out->push_back(static_cast<unsigned char>((v >> s) & 0xFF));
}

void PutTag(std::vector<unsigned char> *out, const char *tag) {
  out->insert(out->end(), tag, tag + 4);
}

}  // namespace

MultiChannelSignal ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  auto bad = [&](const std::string &why) {
    Fail(ErrorCode::kParse, "'" + path + "': " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    bad("not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char *data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::uint32_t size = LoadU32(chunk + 4);
    std::size_t body = pos + 8;
    if (size > bytes.size() - body) bad("chunk overruns file");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) bad("fmt chunk too small");
      format = LoadU16(chunk + 8);
      channels = LoadU16(chunk + 10);
      rate = LoadU32(chunk + 12);
      bits = LoadU16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) bad("extensible fmt chunk too small");
        // First two bytes of the sub-format GUID carry the format tag.
        format = LoadU16(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0) bad("missing fmt chunk");
  if (data == nullptr) bad("missing data chunk");

  MultiChannelSignal sig;
  sig.sample_rate = rate;
  sig.channels.assign(channels, {});
  if (format == kFormatPcm && bits == 16) {
    std::size_t frames = data_size / (2u * channels);
    for (auto &ch : sig.channels) ch.resize(frames);
    for (std::size_t n = 0; n < frames; ++n) {
      for (std::size_t c = 0; c < channels; ++c) {
        auto v = static_cast<std::int16_t>(LoadU16(data + 2 * (n * channels + c)));
        sig.channels[c][n] = static_cast<double>(v) / 32768.0;
      }
    }
  } else if (format == kFormatFloat && bits == 32) {
    std::size_t frames = data_size / (4u * channels);
    for (auto &ch : sig.channels) ch.resize(frames);
    for (std::size_t n = 0; n < frames; ++n) {
      for (std::size_t c = 0; c < channels; ++c) {
        std::uint32_t raw = LoadU32(data + 4 * (n * channels + c));
        sig.channels[c][n] = static_cast<double>(std::bit_cast<float>(raw));
      }
    }
  } else {
    bad("unsupported sample format (need PCM16 or float32)");
  }
  return sig;
}

void WriteWav(const std::string &path, const MultiChannelSignal &sig,
              WavSampleFormat format) {
  sig.Validate();
  Require(sig.NumChannels() > 0 && sig.NumChannels() <= 0xFFFF,
          ErrorCode::kInvalidArgument, "bad channel count for WAV");
  const std::uint16_t channels = static_cast<std::uint16_t>(sig.NumChannels());
  const std::uint16_t bytes_per_sample =
      format == WavSampleFormat::kPcm16 ? 2 : 4;
  const std::uint64_t data_size =
      static_cast<std::uint64_t>(sig.NumSamples()) * channels * bytes_per_sample;
  Require(data_size + 36 <= 0xFFFFFFFFull, ErrorCode::kDimensionOverflow,
          "signal too large for WAV");
  const auto rate = static_cast<std::uint32_t>(std::lround(sig.sample_rate));

  std::vector<unsigned char> out;
  out.reserve(44 + data_size);
  PutTag(&out, "RIFF");
  PutU32(&out, static_cast<std::uint32_t>(36 + data_size));
  PutTag(&out, "WAVE");
  PutTag(&out, "fmt ");
  PutU32(&out, 16);
  PutU16(&out, format == WavSampleFormat::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(&out, channels);
  PutU32(&out, rate);
  PutU32(&out, rate * channels * bytes_per_sample);
  PutU16(&out, static_cast<std::uint16_t>(channels * bytes_per_sample));
  PutU16(&out, static_cast<std::uint16_t>(8 * bytes_per_sample));
  PutTag(&out, "data");
  PutU32(&out, static_cast<std::uint32_t>(data_size));
  for (std::size_t n = 0; n < sig.NumSamples(); ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      double v = sig.channels[c][n];
      if (format == WavSampleFormat::kPcm16) {
        double scaled = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
        PutU16(&out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
      } else {
        PutU32(&out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  Require(os.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  os.write(reinterpret_cast<const char *>(out.data()),
           static_cast<std::streamsize>(out.size()));
  Require(os.good(), ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace mcsv
