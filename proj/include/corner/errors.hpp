#pragma once
#include <stdexcept>
#include <string>

namespace corner {

// Error taxonomy; the CLI maps these onto its exit codes.
enum class errc { parse = 2, precondition = 3, solver = 4, tolerance = 5 };

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail_parse(const std::string& m) { throw error(errc::parse, m); }
[[noreturn]] inline void fail_pre(const std::string& m) { throw error(errc::precondition, m); }
[[noreturn]] inline void fail_solver(const std::string& m) { throw error(errc::solver, m); }
[[noreturn]] inline void fail_tol(const std::string& m) { throw error(errc::tolerance, m); }

inline void require(bool ok, const std::string& m) {
  if (!ok) fail_pre(m);
}

}  // namespace corner
