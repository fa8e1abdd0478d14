#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rhn {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated precondition (dimension mismatch, bad argument, missing cache).
struct contract_error : error {
  using error::error;
};

// Iterative solver ran out of budget. Carries the last iterate so callers
// can inspect how close it got.
struct convergence_error : error {
  double last_iterate = 0.0;
  convergence_error(const std::string& msg, double last)
      : error(msg), last_iterate(last) {}
};

// Non-finite value produced mid-computation. layer/time are -1 when unknown.
struct numeric_error : error {
  long layer = -1;
  long time_step = -1;
  numeric_error(const std::string& msg, long layer_idx = -1, long time_idx = -1)
      : error(msg), layer(layer_idx), time_step(time_idx) {}
};

struct io_error : error {
  using error::error;
};

// Malformed file or config content.
struct format_error : error {
  using error::error;
};

// Checkpoint-specific failure kinds, kept distinct so callers can react.
struct crc_error : format_error {
  using format_error::format_error;
};
struct version_error : format_error {
  using format_error::format_error;
};
struct truncation_error : format_error {
  using format_error::format_error;
};

inline double sigmoid(double x) {
  // Split on sign so exp never overflows.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double sigmoid_prime_from_value(double s) { return s * (1.0 - s); }

inline double tanh_prime_from_value(double th) { return 1.0 - th * th; }

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw contract_error(msg);
}

}  // namespace rhn
