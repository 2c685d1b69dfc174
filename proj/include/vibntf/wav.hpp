// include/vibntf/wav.hpp

// Copyright 2026  The vibntf authors

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

#ifndef VIBNTF_WAV_HPP_
#define VIBNTF_WAV_HPP_

#include <filesystem>

#include "vibntf/audio.hpp"

namespace vibntf {

// Reads a RIFF/WAVE file.  Supported encodings: PCM 16-bit and IEEE float
// 32-bit (plain or WAVE_FORMAT_EXTENSIBLE).  Multi-channel content is
// averaged down to mono; PCM samples are scaled by 1/32768.
// Throws IoError on missing/truncated files, FormatError on anything else.
AudioBuffer read_wav(const std::filesystem::path& path);

// Writes mono IEEE float 32-bit.  Samples outside [-1, 1] are written as-is
// (float WAV does not clip).  read_wav(write_wav(x)) == x within float32
// rounding.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer);

}  // namespace vibntf

#endif  // VIBNTF_WAV_HPP_
