#include "afc/bus/protocol.hpp"

#include <charconv>
#include <cstring>

#include "afc/io_util.hpp"

namespace afc::bus {

const char* field_name(Field f) {
  switch (f) {
    case Field::state: return "state";
    case Field::action: return "action";
    case Field::reward: return "reward";
    case Field::flag: return "flag";
  }
  return "?";
}

Field field_from_name(std::string_view name) {
  if (name == "state") return Field::state;
  if (name == "action") return Field::action;
  if (name == "reward") return Field::reward;
  if (name == "flag") return Field::flag;
  throw ProtocolError("unknown key field: " + std::string(name));
}

std::string Key::str() const {
  std::string s = "run/";
  s += std::to_string(run);
  s += "/sim/";
  s += std::to_string(sim);
  s += "/pe/";
  s += std::to_string(pe);
  s += '/';
  s += field_name(field);
  s += '/';
  s += std::to_string(step);
  return s;
}

namespace {

std::uint64_t parse_id(std::string_view& rest, std::string_view full) {
  std::size_t slash = rest.find('/');
  std::string_view tok = slash == std::string_view::npos ? rest : rest.substr(0, slash);
  std::uint64_t value = 0;
  if (tok.empty()) throw ProtocolError("malformed key: " + std::string(full));
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ProtocolError("malformed key id: " + std::string(full));
  rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
  return value;
}

void expect_segment(std::string_view& rest, std::string_view seg, std::string_view full) {
  if (rest.substr(0, seg.size()) != seg || rest.size() <= seg.size() ||
      rest[seg.size()] != '/') {
    throw ProtocolError("malformed key: " + std::string(full));
  }
  rest = rest.substr(seg.size() + 1);
}

}  // namespace

Key Key::parse(std::string_view text) {
  std::string_view rest = text;
  Key k;
  expect_segment(rest, "run", text);
  k.run = parse_id(rest, text);
  expect_segment(rest, "sim", text);
  k.sim = parse_id(rest, text);
  expect_segment(rest, "pe", text);
  k.pe = parse_id(rest, text);
  std::size_t slash = rest.find('/');
  if (slash == std::string_view::npos) throw ProtocolError("malformed key: " + std::string(text));
  k.field = field_from_name(rest.substr(0, slash));
  rest = rest.substr(slash + 1);
  k.step = parse_id(rest, text);
  if (!rest.empty()) throw ProtocolError("malformed key (trailing): " + std::string(text));
  return k;
}

const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::put: return "PUT";
    case Opcode::get: return "GET";
    case Opcode::take: return "TAKE";
    case Opcode::wait_take: return "WAIT_TAKE";
    case Opcode::ping: return "PING";
    case Opcode::shutdown: return "SHUTDOWN";
    case Opcode::ok: return "OK";
    case Opcode::miss: return "MISS";
    case Opcode::err: return "ERR";
  }
  return "?";
}

void encode_frame(const Frame& f, std::vector<std::uint8_t>& out) {
  if (f.key.size() > 0xffff) throw ProtocolError("key too long");
  const std::uint32_t body =
      1 + 2 + static_cast<std::uint32_t>(f.key.size()) + 4 +
      8 * static_cast<std::uint32_t>(f.payload.size());
  out.reserve(out.size() + 4 + body);
  put_u32(out, body);
  out.push_back(static_cast<std::uint8_t>(f.op));
  put_u16(out, static_cast<std::uint16_t>(f.key.size()));
  out.insert(out.end(), f.key.begin(), f.key.end());
  put_u32(out, static_cast<std::uint32_t>(f.payload.size()));
  for (double v : f.payload) put_f64(out, v);
}

Frame decode_frame_body(const std::uint8_t* data, std::size_t size) {
  ByteReader r{data, size};
  Frame f;
  const std::uint8_t op = r.u8("opcode");
  switch (op) {
    case 1: case 2: case 3: case 4: case 5: case 6: case 16: case 17: case 18:
      f.op = static_cast<Opcode>(op);
      break;
    default:
      throw ProtocolError("unknown opcode " + std::to_string(op));
  }
  const std::uint16_t klen = r.u16("key length");
  f.key = r.bytes(klen, "key");
  const std::uint32_t count = r.u32("payload count");
  if (r.remaining() != static_cast<std::size_t>(count) * 8)
    throw ProtocolError("frame length does not match payload count");
  f.payload.resize(count);
  for (auto& v : f.payload) v = r.f64("payload");
  return f;
}

}  // namespace afc::bus
