#pragma once

#include <stdexcept>
#include <string>

namespace lcm {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct division_by_zero : error {
  division_by_zero() : error("division by zero in prime field") {}
};

struct dimension_error : error {
  using error::error;
};

struct degenerate_nodes : error {
  using error::error;
};

struct bad_group_index : error {
  using error::error;
};

struct bad_group_size : error {
  using error::error;
};

struct bad_pair_order : error {
  using error::error;
};

struct chunking_error : error {
  using error::error;
};

// Parameter set violates a feasibility constraint; message names the
// violated inequality.
struct infeasible_params : error {
  using error::error;
};

struct infeasible_resiliency : error {
  using error::error;
};

struct plan_infeasible : error {
  using error::error;
};

struct plan_violation : error {
  using error::error;
};

struct decode_underdetermined : error {
  using error::error;
};

struct inconsistent_shares : error {
  using error::error;
};

struct threshold_exceeded : error {
  using error::error;
};

struct too_large_to_enumerate : error {
  using error::error;
};

}  // namespace lcm
