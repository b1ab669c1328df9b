#pragma once

#include <stdexcept>
#include <string>

namespace dlt {

enum class Errc {
  negative_mass,
  not_normalized,
  invalid_parameter,
  wrong_perspective,
  domain_error,
  degree_exceeds_class,
  mode_mismatch,
  buffers_not_full,
  windows_not_configured,
  payload_disabled,
  unknown_scope,
  invalid_grid,
  argument_out_of_range,
  validation_failed,
  config_invalid,
  io_error,
  no_crossing,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

} // namespace dlt
