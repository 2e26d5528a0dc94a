#pragma once

// Seeded random instance generator. All draws go through hand-rolled
// helpers on top of the raw engine because the standard distributions
// are allowed to differ between library implementations and the output
// must be byte-stable everywhere.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "mlpath/network.hpp"

namespace mlpath {

struct GenSpec {
  std::uint32_t node_count = 8;
  std::uint32_t protocol_count = 2;
  double edge_probability = 0.4;
  double function_density = 0.4;  // gates encapsulation/decapsulation sampling
  std::uint64_t seed = 1;
};

namespace detail {

inline bool chance(std::mt19937_64& rng, double p) {
  // 53-bit mantissa keeps the comparison exact and portable
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

inline std::string padded_name(char prefix, std::uint32_t i, std::uint32_t total) {
  std::uint32_t width = 1;
  for (std::uint32_t t = total - 1; t >= 10; t /= 10) ++width;
  std::string digits = std::to_string(i);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

}  // namespace detail

/// Deterministic per (spec, seed). Node 0 is the source, the last node the
/// destination. Passive functions are sampled at a fixed rate independent
/// of function_density, so turning the density down produces sparse
/// adaptation capability rather than nodes that cannot forward at all.
inline Network generate_network(const GenSpec& spec) {
  if (spec.node_count < 2) throw std::invalid_argument("generator needs at least two nodes");
  if (spec.protocol_count < 1) throw std::invalid_argument("generator needs a protocol");
  if (spec.edge_probability < 0 || spec.edge_probability > 1 || spec.function_density < 0 ||
      spec.function_density > 1)
    throw std::invalid_argument("probabilities must lie in [0,1]");

  std::mt19937_64 rng(spec.seed);
  Network net;
  for (std::uint32_t p = 0; p < spec.protocol_count; ++p)
    net.protocols.push_back(spec.protocol_count <= 26
                                ? std::string(1, static_cast<char>('a' + p))
                                : detail::padded_name('p', p, spec.protocol_count));
  for (std::uint32_t u = 0; u < spec.node_count; ++u)
    net.nodes.push_back(detail::padded_name('n', u, spec.node_count));
  net.source = 0;
  net.destination = spec.node_count - 1;

  for (NodeId u = 0; u < spec.node_count; ++u)
    for (NodeId v = 0; v < spec.node_count; ++v)
      if (u != v && detail::chance(rng, spec.edge_probability)) net.links.push_back({u, v});

  constexpr double kPassiveRate = 0.5;
  net.functions.resize(spec.node_count);
  for (NodeId u = 0; u < spec.node_count; ++u) {
    auto& fns = net.functions[u];
    for (ProtocolId a = 0; a < spec.protocol_count; ++a)
      if (detail::chance(rng, kPassiveRate)) fns.push_back(passive(a));
    for (ProtocolId a = 0; a < spec.protocol_count; ++a)
      for (ProtocolId b = 0; b < spec.protocol_count; ++b) {
        if (a == b) continue;
        if (detail::chance(rng, spec.function_density)) fns.push_back(encap(a, b));
        if (detail::chance(rng, spec.function_density)) fns.push_back(decap(a, b));
      }
    std::sort(fns.begin(), fns.end());
  }
  validate(net);
  return net;
}

}  // namespace mlpath
