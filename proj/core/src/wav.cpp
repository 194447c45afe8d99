// Copyright (c) 2026 The respscreen Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "respscreen/audio.hpp"
#include "respscreen/error.hpp"
#include "respscreen/text.hpp"

namespace respscreen {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(std::string_view b, std::size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 3])) << 24;
}

std::uint16_t read_u16(std::string_view b, std::size_t pos) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[pos]) |
                                    static_cast<unsigned char>(b[pos + 1]) << 8);
}

struct Format {
  std::uint16_t code = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(std::string_view b, std::size_t pos, const Format& f) {
  if (f.code == kFormatPcm) {
    switch (f.bits) {
      case 8:
        return (static_cast<double>(static_cast<unsigned char>(b[pos])) - 128.0) / 128.0;
      case 16:
        return static_cast<double>(static_cast<std::int16_t>(read_u16(b, pos))) / 32768.0;
      case 24: {
        std::int32_t v = static_cast<std::int32_t>(
            static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos])) << 8 |
            static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 1])) << 16 |
            static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 2])) << 24);
        return static_cast<double>(v >> 8) / 8388608.0;
      }
      case 32:
        return static_cast<double>(static_cast<std::int32_t>(read_u32(b, pos))) / 2147483648.0;
    }
  } else if (f.bits == 32) {
    std::uint32_t raw = read_u32(b, pos);
    float v;
    std::memcpy(&v, &raw, sizeof v);
    return static_cast<double>(v);
  } else if (f.bits == 64) {
    std::uint64_t raw = static_cast<std::uint64_t>(read_u32(b, pos)) |
                        static_cast<std::uint64_t>(read_u32(b, pos + 4)) << 32;
    double v;
    std::memcpy(&v, &raw, sizeof v);
    return v;
  }
  return 0.0;  // unreachable, formats are checked up front
}

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}
void put_tag(std::vector<char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

double AudioSegment::peak() const {
  double p = 0.0;
  for (double s : samples) p = std::max(p, std::abs(s));
  return p;
}

AudioSegment decode_wav(std::string_view b) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") {
    fail(ErrorKind::kData, "not a RIFF/WAVE file");
  }
  std::optional<Format> fmt;
  std::optional<std::string_view> data;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    std::string_view id = b.substr(pos, 4);
    std::uint32_t size = read_u32(b, pos + 4);
    std::size_t body = pos + 8;
    if (id == "data") {
      if (size > b.size() - body) fail(ErrorKind::kData, "truncated wave data chunk");
      data = b.substr(body, size);
    } else if (id == "fmt ") {
      if (size < 16 || size > b.size() - body) fail(ErrorKind::kData, "truncated fmt chunk");
      Format f;
      f.code = read_u16(b, body);
      f.channels = read_u16(b, body + 2);
      f.rate = read_u32(b, body + 4);
      f.block_align = read_u16(b, body + 12);
      f.bits = read_u16(b, body + 14);
      if (f.code == kFormatExtensible) {
        if (size < 40) fail(ErrorKind::kData, "truncated extensible fmt chunk");
        f.code = read_u16(b, body + 24);  // first two bytes of the sub-format GUID
      }
      fmt = f;
    }
    if (size > b.size() - body) break;
    pos = body + size + (size & 1u);
  }
  if (!fmt) fail(ErrorKind::kData, "wave file has no fmt chunk");
  if (!data) fail(ErrorKind::kData, "wave file has no data chunk");

  const Format& f = *fmt;
  bool pcm_ok = f.code == kFormatPcm &&
                (f.bits == 8 || f.bits == 16 || f.bits == 24 || f.bits == 32);
  bool float_ok = f.code == kFormatFloat && (f.bits == 32 || f.bits == 64);
  if (!pcm_ok && !float_ok) {
    fail(ErrorKind::kData, "unsupported wave codec (format " + std::to_string(f.code) + ", " +
                               std::to_string(f.bits) + " bits)");
  }
  if (f.channels == 0 || f.rate == 0) fail(ErrorKind::kData, "invalid wave header");
  const std::size_t bytes_per_sample = f.bits / 8u;
  const std::size_t frame_bytes = bytes_per_sample * f.channels;
  if (f.block_align != frame_bytes) fail(ErrorKind::kData, "inconsistent wave block alignment");

  AudioSegment seg;
  seg.sample_rate = f.rate;
  const std::size_t frames = data->size() / frame_bytes;
  seg.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < f.channels; ++c) {
      sum += decode_sample(*data, i * frame_bytes + c * bytes_per_sample, f);
    }
    seg.samples[i] = f.channels == 1 ? sum : sum / f.channels;
  }
  return seg;
}

AudioSegment load_wav(const std::filesystem::path& path) {
  std::string bytes = read_file(path.string());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<char> encode_wav(const AudioSegment& segment, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(segment.samples.size() * bits / 8);
  const auto rate = static_cast<std::uint32_t>(std::lround(segment.sample_rate));

  std::vector<char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * bits / 8);
  put_u16(out, bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : segment.samples) {
    if (pcm) {
      double v = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(v)));
    } else {
      float v = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &v, sizeof raw);
      put_u32(out, raw);
    }
  }
  return out;
}

void save_wav(const std::filesystem::path& path, const AudioSegment& segment,
              WavEncoding encoding) {
  auto bytes = encode_wav(segment, encoding);
  write_file(path.string(), std::string_view(bytes.data(), bytes.size()));
}

}  // namespace respscreen
