// include/mcsv/wav_io.h

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

#ifndef MCSV_WAV_IO_H_
#define MCSV_WAV_IO_H_

#include <string>

#include "mcsv/signal.h"

namespace mcsv {

enum class WavSampleFormat { kPcm16, kFloat32 };

// Reads PCM16 or IEEE float32 RIFF/WAVE (plain or WAVE_FORMAT_EXTENSIBLE),
// any channel count. PCM16 is scaled to [-1, 1). Throws kIo / kParse.
MultiChannelSignal ReadWav(const std::string &path);

void WriteWav(const std::string &path, const MultiChannelSignal &sig,
              WavSampleFormat format = WavSampleFormat::kFloat32);

}  // namespace mcsv

#endif  // MCSV_WAV_IO_H_
