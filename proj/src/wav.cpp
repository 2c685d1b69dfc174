// src/wav.cpp

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

#include "vibntf/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "vibntf/errors.hpp"

namespace vibntf {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

float f32_from_bits(std::uint32_t bits) {
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

std::uint32_t bits_from_f32(float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  return bits;
}

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_wav: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (!in.good() && !in.eof()) throw IoError("read_wav: read failure on " + path.string());

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("read_wav: not a RIFF/WAVE file: " + path.string());
  }

  std::uint16_t format = 0, channels = 0, bits_per_sample = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* tag = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      throw IoError("read_wav: truncated chunk in " + path.string());
    }
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw FormatError("read_wav: short fmt chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits_per_sample = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 40) throw FormatError("read_wav: short extensible fmt chunk");
        format = read_u16(bytes.data() + body + 24);  // first two GUID bytes
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr) {
    throw FormatError("read_wav: missing fmt or data chunk in " + path.string());
  }
  if (channels == 0 || sample_rate == 0) {
    throw FormatError("read_wav: bad fmt fields in " + path.string());
  }

  const bool pcm16 = format == kFormatPcm && bits_per_sample == 16;
  const bool float32 = format == kFormatFloat && bits_per_sample == 32;
  if (!pcm16 && !float32) {
    throw FormatError("read_wav: unsupported encoding (format tag " +
                      std::to_string(format) + ", " + std::to_string(bits_per_sample) +
                      " bits) in " + path.string());
  }

  const std::uint32_t bytes_per_sample = bits_per_sample / 8;
  const std::uint32_t frame_size = bytes_per_sample * channels;
  if (data_size % frame_size != 0) {
    throw IoError("read_wav: data chunk not a whole number of frames in " + path.string());
  }
  const std::uint32_t frames = data_size / frame_size;

  AudioBuffer out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples.resize(frames);
  const double channel_scale = 1.0 / channels;
  for (std::uint32_t n = 0; n < frames; ++n) {
    double acc = 0.0;
    for (std::uint32_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + n * frame_size + c * bytes_per_sample;
      if (pcm16) {
        const std::int16_t raw = static_cast<std::int16_t>(read_u16(p));
        acc += raw / 32768.0;
      } else {
        acc += static_cast<double>(f32_from_bits(read_u32(p)));
      }
    }
    out.samples[n] = acc * channel_scale;
  }
  if (!all_finite(out.samples)) {
    throw FormatError("read_wav: non-finite sample values in " + path.string());
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer) {
  if (!all_finite(buffer.samples)) {
    throw DegenerateInputError("write_wav: buffer contains NaN/Inf");
  }
  if (buffer.sample_rate <= 0) {
    throw DegenerateInputError("write_wav: sample rate must be positive");
  }

  const std::uint32_t frames = static_cast<std::uint32_t>(buffer.samples.size());
  const std::uint32_t data_size = frames * 4;

  std::vector<unsigned char> out;
  out.reserve(58 + data_size);
  put_tag(out, "RIFF");
  // fmt (18) + fact (4) + data payloads plus chunk headers and "WAVE".
  put_u32(out, 4 + (8 + 18) + (8 + 4) + (8 + data_size));
  put_tag(out, "WAVE");

  put_tag(out, "fmt ");
  put_u32(out, 18);
  put_u16(out, kFormatFloat);
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate) * 4);  // byte rate
  put_u16(out, 4);   // block align
  put_u16(out, 32);  // bits per sample
  put_u16(out, 0);   // extension size

  // Non-PCM formats carry a fact chunk with the frame count.
  put_tag(out, "fact");
  put_u32(out, 4);
  put_u32(out, frames);

  put_tag(out, "data");
  put_u32(out, data_size);
  for (double x : buffer.samples) {
    put_u32(out, bits_from_f32(static_cast<float>(x)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("write_wav: cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f.good()) throw IoError("write_wav: write failure on " + path.string());
}

}  // namespace vibntf
