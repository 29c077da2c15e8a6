#include "ringsat/proof.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <unordered_map>

namespace ringsat {

const char *to_string(ProofMode mode) {
  switch (mode) {
  case ProofMode::Off:
    return "off";
  case ProofMode::Shared:
    return "shared";
  case ProofMode::FakeCopy:
    return "fakecopy";
  }
  return "?";
}

ProofMode parse_proof_mode(const std::string &name) {
  if (name == "shared")
    return ProofMode::Shared;
  if (name == "fakecopy" || name == "fake-copy")
    return ProofMode::FakeCopy;
  if (name == "off")
    return ProofMode::Off;
  throw std::invalid_argument("unknown proof mode '" + name + "'");
}

namespace {

std::atomic<uint64_t> tracer_instances{0};

// Per thread: the buffer of the most recently used tracer plus all others.
// Instance numbers are never reused, so stale entries are harmless.
struct LocalBufferCache {
  uint64_t instance = 0;
  void *buffer = nullptr;
  std::unordered_map<uint64_t, void *> all;
};

thread_local LocalBufferCache local_cache;

void put_varint(std::string &out, uint64_t value) {
  while (value > 127) {
    out.push_back(static_cast<char>((value & 127) | 128));
    value >>= 7;
  }
  out.push_back(static_cast<char>(value));
}

void put_ascii_int(std::string &out, int64_t value) {
  char digits[24];
  const auto [end, ec] = std::to_chars(digits, digits + sizeof digits, value);
  assert(ec == std::errc());
  out.append(digits, end);
}

} // namespace

ProofTracer::ProofTracer(const std::string &path, ProofEncoding encoding, ProofMode mode)
    : instance_(++tracer_instances), encoding_(encoding), mode_(mode) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_)
    throw std::runtime_error("can not open proof file '" + path + "' for writing");
}

ProofTracer::ProofTracer(ProofEncoding encoding, ProofMode mode)
    : instance_(++tracer_instances), encoding_(encoding), mode_(mode), in_memory_(true) {}

ProofTracer::~ProofTracer() { close(); }

ProofTracer::Buffer &ProofTracer::local_buffer() {
  auto &cache = local_cache;
  if (cache.instance == instance_)
    return *static_cast<Buffer *>(cache.buffer);
  auto [it, inserted] = cache.all.try_emplace(instance_, nullptr);
  if (inserted) {
    std::lock_guard lock(buffers_mutex_);
    buffers_.push_back(std::make_unique<Buffer>());
    it->second = buffers_.back().get();
  }
  Buffer *found = static_cast<Buffer *>(it->second);
  cache.instance = instance_;
  cache.buffer = found;
  return *found;
}

void ProofTracer::append_line(ProofKind kind, std::span<const Lit> literals, uint64_t id) {
  if (mode_ == ProofMode::Off)
    return;
  Buffer &buffer = local_buffer();
  std::string &out = buffer.bytes;
  if (encoding_ == ProofEncoding::Ascii) {
    if (kind == ProofKind::Delete)
      out.append("d ");
    for (Lit lit : literals) {
      put_ascii_int(out, decode_lit(lit));
      out.push_back(' ');
    }
    out.append("0\n");
  } else {
    out.push_back(kind == ProofKind::Add ? 'a' : 'd');
    for (Lit lit : literals)
      put_varint(out, lit.code());
    out.push_back('\0');
  }
  if (kind == ProofKind::Add)
    adds_.fetch_add(1, std::memory_order_relaxed);
  else
    deletes_.fetch_add(1, std::memory_order_relaxed);
  if (auditing_) {
    std::lock_guard lock(audit_mutex_);
    audit_.push_back({kind, id, std::vector<Lit>(literals.begin(), literals.end())});
  }
  if (out.size() >= flush_threshold)
    write_out(buffer);
}

void ProofTracer::add(std::span<const Lit> literals, uint64_t id) { append_line(ProofKind::Add, literals, id); }

void ProofTracer::remove(std::span<const Lit> literals, uint64_t id) {
  append_line(ProofKind::Delete, literals, id);
}

void ProofTracer::import(std::span<const Lit> literals, uint64_t id) {
  assert(mode_ == ProofMode::FakeCopy);
  append_line(ProofKind::Add, literals, id);
}

void ProofTracer::add_empty() {
  if (mode_ == ProofMode::Off)
    return;
  append_line(ProofKind::Add, {}, 0);
  complete_.store(true, std::memory_order_release);
}

void ProofTracer::write_out(Buffer &buffer) {
  if (buffer.bytes.empty())
    return;
  {
    std::lock_guard lock(sink_mutex_);
    if (in_memory_) {
      memory_.append(buffer.bytes);
    } else if (file_) {
      if (std::fwrite(buffer.bytes.data(), 1, buffer.bytes.size(), file_) != buffer.bytes.size()) {
        std::fputs("ringsat: fatal: proof write failed\n", stderr);
        std::abort();
      }
    }
  }
  bytes_.fetch_add(buffer.bytes.size(), std::memory_order_relaxed);
  buffer.bytes.clear();
}

void ProofTracer::flush() {
  if (mode_ == ProofMode::Off)
    return;
  write_out(local_buffer());
}

void ProofTracer::close() {
  if (closed_)
    return;
  closed_ = true;
  {
    std::lock_guard lock(buffers_mutex_);
    for (auto &buffer : buffers_)
      write_out(*buffer);
  }
  std::lock_guard lock(sink_mutex_);
  if (file_) {
    if (std::fclose(file_) != 0) {
      std::fputs("ringsat: fatal: closing proof failed\n", stderr);
      std::abort();
    }
    file_ = nullptr;
  }
}

std::string ProofTracer::contents() const {
  std::lock_guard lock(sink_mutex_);
  return memory_;
}

void ProofTracer::enable_audit() {
  std::lock_guard lock(audit_mutex_);
  auditing_ = true;
}

std::vector<ProofEvent> ProofTracer::audit() const {
  std::lock_guard lock(audit_mutex_);
  return audit_;
}

/*------------------------------------------------------------------------*/

ProofParseError::ProofParseError(size_t line, const std::string &message)
    : std::runtime_error("proof line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<ProofLine> parse_ascii(std::string_view text) {
  std::vector<ProofLine> lines;
  size_t pos = 0, line = 1;
  ProofLine current;
  bool open = false;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '\n') {
      line++;
      pos++;
      continue;
    }
    if (is_space(c)) {
      pos++;
      continue;
    }
    if (c == 'c' && !open) {
      while (pos < text.size() && text[pos] != '\n')
        pos++;
      continue;
    }
    if (c == 'd' && !open) {
      current = ProofLine{ProofKind::Delete, {}, line};
      open = true;
      pos++;
      continue;
    }
    const size_t start = pos;
    while (pos < text.size() && !is_space(text[pos]))
      pos++;
    int64_t value = 0;
    const char *first = text.data() + start, *last = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
      throw ProofParseError(line, "expected integer, got '" + std::string(first, last) + "'");
    if (!open) {
      current = ProofLine{ProofKind::Add, {}, line};
      open = true;
    }
    if (value == 0) {
      lines.push_back(std::move(current));
      current = ProofLine{};
      open = false;
    } else {
      current.literals.push_back(value);
    }
  }
  if (open)
    throw ProofParseError(current.line, "unterminated proof line");
  return lines;
}

std::vector<ProofLine> parse_binary(std::string_view bytes) {
  std::vector<ProofLine> lines;
  size_t pos = 0, step = 0;
  while (pos < bytes.size()) {
    const auto tag = static_cast<unsigned char>(bytes[pos++]);
    step++;
    ProofLine current;
    current.line = step;
    if (tag == 'a')
      current.kind = ProofKind::Add;
    else if (tag == 'd')
      current.kind = ProofKind::Delete;
    else
      throw ProofParseError(step, "invalid binary proof tag");
    for (;;) {
      uint64_t value = 0;
      unsigned shift = 0;
      for (;;) {
        if (pos >= bytes.size())
          throw ProofParseError(step, "truncated binary proof line");
        const auto byte = static_cast<unsigned char>(bytes[pos++]);
        value |= static_cast<uint64_t>(byte & 127) << shift;
        if (!(byte & 128))
          break;
        shift += 7;
        if (shift > 56)
          throw ProofParseError(step, "binary literal too large");
      }
      if (!value)
        break;
      if (value < 2)
        throw ProofParseError(step, "invalid binary literal");
      const auto magnitude = static_cast<int64_t>(value >> 1);
      current.literals.push_back((value & 1) ? -magnitude : magnitude);
    }
    lines.push_back(std::move(current));
  }
  return lines;
}

} // namespace

std::vector<ProofLine> parse_proof(std::string_view bytes, ProofEncoding encoding) {
  return encoding == ProofEncoding::Ascii ? parse_ascii(bytes) : parse_binary(bytes);
}

std::vector<ProofLine> parse_proof_file(const std::string &path, ProofEncoding encoding) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("can not open proof '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_proof(bytes, encoding);
}

std::string encode_proof_line(ProofKind kind, std::span<const int64_t> literals, ProofEncoding encoding) {
  std::string out;
  if (encoding == ProofEncoding::Ascii) {
    if (kind == ProofKind::Delete)
      out.append("d ");
    for (int64_t lit : literals) {
      put_ascii_int(out, lit);
      out.push_back(' ');
    }
    out.append("0\n");
  } else {
    out.push_back(kind == ProofKind::Add ? 'a' : 'd');
    for (int64_t lit : literals)
      put_varint(out, 2 * static_cast<uint64_t>(lit < 0 ? -lit : lit) + (lit < 0 ? 1 : 0));
    out.push_back('\0');
  }
  return out;
}

} // namespace ringsat
