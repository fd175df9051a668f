#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afc/errors.hpp"

namespace afc::bus {

enum class Field : std::uint8_t { state = 0, action = 1, reward = 2, flag = 3 };

const char* field_name(Field f);
Field field_from_name(std::string_view name);

// Structured key: run/{run}/sim/{sim}/pe/{pe}/{field}/{step}
struct Key {
  std::uint64_t run = 0;
  std::uint64_t sim = 0;
  std::uint64_t pe = 0;
  Field field = Field::state;
  std::uint64_t step = 0;

  std::string str() const;
  static Key parse(std::string_view text);

  bool operator==(const Key&) const = default;
};

enum class Opcode : std::uint8_t {
  put = 1,
  get = 2,
  take = 3,
  wait_take = 4,
  ping = 5,
  shutdown = 6,
  ok = 16,
  miss = 17,
  err = 18,
};

const char* opcode_name(Opcode op);

// Wire frame. Serialized as:
//   u32 length (bytes after this field)
//   u8  opcode
//   u16 key length, key bytes
//   u32 payload count, f64 little-endian values
// WAIT_TAKE requests carry the timeout in milliseconds as a single
// payload element. ERR responses carry the message in the key field.
struct Frame {
  Opcode op = Opcode::ping;
  std::string key;
  std::vector<double> payload;

  bool operator==(const Frame&) const = default;
};

void encode_frame(const Frame& f, std::vector<std::uint8_t>& out);
// Decodes the frame body (bytes after the length prefix).
Frame decode_frame_body(const std::uint8_t* data, std::size_t size);

inline constexpr std::size_t kMaxFrameBytes = 1 << 26;

}  // namespace afc::bus
