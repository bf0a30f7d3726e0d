#pragma once

#include <stdexcept>
#include <string>

namespace dd {

// Stable error codes. The C API exposes these verbatim, so the numeric
// values must not be reordered.
enum class Errc : int {
  ok = 0,
  io = 1,
  parse = 2,
  label = 3,
  duplicate_id = 4,
  arity = 5,
  balance = 6,
  split = 7,
  param = 8,
  fit = 9,
  domain = 10,
  tag = 11,
  shape = 12,
  format = 13,
  version = 14,
  integrity = 15,
  kind = 16,
  config = 17,
  evaluation = 18,
  profile = 19,
  ingest = 20,
  internal = 21,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace dd
