#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lawn/mlp.hpp"
#include "lawn/policy.hpp"
#include "lawn/rng.hpp"

namespace lawn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Versioned binary dump: dimensions, every parameter tensor of both networks
// (the continuous log-std rides along as the actor's last tensor), both Adam
// states, the action-sampling RNG, and the config hash of the producing run.
// Doubles are stored raw, so a reload reproduces forward passes bit-exactly.
void save_checkpoint(const std::string& path, HybridPolicy& policy, Adam& actor_opt,
                     Adam& critic_opt, const Rng::State& action_rng,
                     std::uint64_t config_hash, int episodes_trained);

struct LoadedCheckpoint {
    HybridPolicy policy;
    Adam actor_opt;
    Adam critic_opt;
    Rng::State action_rng;
    std::uint64_t config_hash = 0;
    int episodes_trained = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace lawn
