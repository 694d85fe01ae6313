#pragma once

#include <stdexcept>
#include <string>

#include "forkseq/history.hpp"
#include "forkseq/register_spec.hpp"

namespace forkseq {

enum class TraceSource { generated, simulated, external };

std::string to_string(TraceSource s);

// Line-oriented trace: a JSON header line carrying the register/writer map, a
// free-form comment and the source tag, followed by one JSON event per line
// in history order. Bottom is encoded as JSON null.
struct TraceFile {
  RegisterSpec registers;
  std::string comment;
  TraceSource source = TraceSource::external;
  History history;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string serialize_trace(const TraceFile& t);
TraceFile parse_trace(const std::string& text);  // throws TraceParseError

}  // namespace forkseq
