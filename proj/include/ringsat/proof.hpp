#pragma once

#include "ringsat/lit.hpp"

#include <atomic>
#include <cstdio>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace ringsat {

enum class ProofMode { Off, Shared, FakeCopy };
enum class ProofEncoding { Ascii, Binary };

const char *to_string(ProofMode mode);
ProofMode parse_proof_mode(const std::string &name);

enum class ProofKind : uint8_t { Add, Delete };

// One recorded trace event, kept only when auditing is enabled.  'id' is the
// clause id for stored clauses and 0 for virtual (unit/binary) clauses.
struct ProofEvent {
  ProofKind kind;
  uint64_t id;
  std::vector<Lit> literals;
};

/*------------------------------------------------------------------------*/

// Single proof trace shared by all threads.  Every thread appends complete
// lines to its own buffer; a buffer is written to the sink with one locked
// call, so lines of different threads never interleave.  A thread has to
// 'flush' before it publishes a clause it traced to other threads and
// before it drops references to clauses other threads may still delete.

class ProofTracer {
public:
  static constexpr size_t flush_threshold = 64 * 1024;

  // Opens 'path' for writing; throws std::runtime_error if that fails.
  ProofTracer(const std::string &path, ProofEncoding encoding, ProofMode mode);

  // Collects the proof in memory (see 'contents').
  ProofTracer(ProofEncoding encoding, ProofMode mode);

  ~ProofTracer();

  ProofTracer(const ProofTracer &) = delete;
  ProofTracer &operator=(const ProofTracer &) = delete;

  ProofMode mode() const { return mode_; }
  ProofEncoding encoding() const { return encoding_; }
  bool enabled() const { return mode_ != ProofMode::Off; }
  bool fake_copy() const { return mode_ == ProofMode::FakeCopy; }

  void add(std::span<const Lit> literals, uint64_t id = 0);
  void remove(std::span<const Lit> literals, uint64_t id = 0);

  // Duplicate addition of an imported clause; FakeCopy mode only.
  void import(std::span<const Lit> literals, uint64_t id = 0);

  void add_empty();

  // Writes the calling thread's buffer.
  void flush();

  // Writes all buffers and closes the sink.  Only valid once no other
  // thread traces anymore.  Idempotent.
  void close();

  bool complete() const { return complete_.load(std::memory_order_acquire); }
  uint64_t bytes_written() const { return bytes_.load(std::memory_order_relaxed); }
  uint64_t added() const { return adds_.load(std::memory_order_relaxed); }
  uint64_t deleted() const { return deletes_.load(std::memory_order_relaxed); }

  // In-memory sink only: everything flushed so far.
  std::string contents() const;

  void enable_audit();
  std::vector<ProofEvent> audit() const;

private:
  struct Buffer {
    std::string bytes;
  };

  Buffer &local_buffer();
  void append_line(ProofKind kind, std::span<const Lit> literals, uint64_t id);
  void write_out(Buffer &buffer);

  const uint64_t instance_;
  const ProofEncoding encoding_;
  const ProofMode mode_;
  std::FILE *file_ = nullptr;
  bool in_memory_ = false;
  bool closed_ = false;

  mutable std::mutex sink_mutex_;
  std::string memory_;

  std::mutex buffers_mutex_;
  std::vector<std::unique_ptr<Buffer>> buffers_;

  std::atomic<bool> complete_{false};
  std::atomic<uint64_t> bytes_{0};
  std::atomic<uint64_t> adds_{0};
  std::atomic<uint64_t> deletes_{0};

  mutable std::mutex audit_mutex_;
  bool auditing_ = false;
  std::vector<ProofEvent> audit_;
};

/*------------------------------------------------------------------------*/

// Reading proofs back (checker, hygiene checks, experiments).

struct ProofLine {
  ProofKind kind = ProofKind::Add;
  std::vector<int64_t> literals;
  size_t line = 0; // 1-based line (ASCII) or step number (binary)
};

class ProofParseError : public std::runtime_error {
public:
  ProofParseError(size_t line, const std::string &message);
  size_t line() const { return line_; }

private:
  size_t line_;
};

std::vector<ProofLine> parse_proof(std::string_view bytes, ProofEncoding encoding);
std::vector<ProofLine> parse_proof_file(const std::string &path, ProofEncoding encoding);

// Encodes one line as the tracer would.
std::string encode_proof_line(ProofKind kind, std::span<const int64_t> literals, ProofEncoding encoding);

} // namespace ringsat
