#pragma once

#include <stdexcept>
#include <string>

namespace eqp {

enum class errc {
  cap_exceeded,
  parse_error,
  unknown_symbol,
  unknown_generator,
  point_out_of_range,
  degree_mismatch,
  not_in_group,
  missing_image,
  mode_mismatch,
  malformed_step,
  action_not_well_defined,
  invalid_input,
  internal,
};

class error : public std::runtime_error {
 public:
  error(errc c, std::string msg) : std::runtime_error(std::move(msg)), code_(c) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

}  // namespace eqp
