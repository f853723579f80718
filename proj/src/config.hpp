#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

#include "model.hpp"
#include "simulate.hpp"

namespace ctbp {

// Schema violations carry the offending key path in the message.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ProcessSpec spec;
  std::string command;        // malthusian | degdist | asymptotics |
                              // simulate | validate
  std::size_t kmax = 100;
  std::uint64_t seed = 1;
  StopRule stop;
  std::string out = ".";
  double tolerance = 1e-8;
};

// Parse just the process description ({"weights": .., "aging": ..,
// "fitness": ..}); all blocks optional, unknown keys rejected by path.
ProcessSpec parse_spec(const std::string& json_text);

// Parse a full run configuration ({"spec": .., "command": .., ...}).
RunConfig parse_config(const std::string& json_text);

}  // namespace ctbp
