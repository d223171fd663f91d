#pragma once

#include <cstdint>

namespace lcm {

// All protocol constants for one configuration. k is derived, never set.
struct Params {
  int num_clients = 0;       // E
  int num_servers = 0;       // H
  int stragglers = 0;        // s, max straggling links per client
  int server_collusion = 0;  // T_h
  int client_collusion = 0;  // T_c
  int group_size = 1;        // v
  size_t grad_len = 1;       // p, gradient length in field symbols
  uint64_t prime = 2147483647ULL;  // q

  int num_groups() const { return num_servers / group_size; }

  // Recovery dimension: any k + T_h distinct-group evaluations determine
  // a client's polynomial.
  int recovery_dim() const {
    return num_groups() - (2 * stragglers) / group_size - server_collusion;
  }

  int code_degree() const { return recovery_dim() + server_collusion; }

  // Gradient length after padding to a multiple of k.
  size_t padded_len() const {
    size_t k = static_cast<size_t>(recovery_dim());
    return (grad_len + k - 1) / k * k;
  }

  size_t chunk_len() const {
    return padded_len() / static_cast<size_t>(recovery_dim());
  }
};

}  // namespace lcm
