#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "lawn/environment.hpp"
#include "lawn/ppo.hpp"

namespace lawn {

inline constexpr int kConfigSchemaVersion = 1;

// Whole-experiment configuration: world, channel, fleet, reward shaping,
// learner hyperparameters, seed and output location. Every key is optional
// (Table defaults apply); unknown keys are rejected wherever they appear.
struct ExperimentConfig {
    EnvConfig env;
    PpoHyper ppo;
    std::uint64_t seed = 1;
    std::string output_dir = "runs/out";

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::string& path);
    nlohmann::json to_json() const;  // canonical form; loaders round-trip it
    std::uint64_t hash() const;      // FNV-1a over the canonical dump
    void validate() const;
};

}  // namespace lawn
