#pragma once

#include <stdexcept>
#include <string>

namespace rcount {

enum class Errc {
  invalid_code,
  invalid_graph,
  arity,
  invalid_clique,
  capacity,
  precondition,
  unreliable_result,
  domain,
  empty_summary,
  parse,
};

const char* to_string(Errc code);

// Single exception type for the library; `code()` tells callers which
// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rcount
