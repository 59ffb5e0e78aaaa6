#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace assemble {

enum class Role { Builder, Attacker, Idle };

std::string_view to_string(Role r);
Role parse_role(std::string_view s);

// Every tunable of a match. Key names in the config file match the member names.
struct SimConfig {
    std::uint64_t seed = 1;
    int width = 30;
    int height = 30;
    std::vector<std::string> teams{"A", "B"};
    int entitiesPerTeam = 10;
    // One role per entity index within a team; the same list applies to every team.
    std::vector<Role> roles{Role::Builder,  Role::Builder,  Role::Builder,  Role::Builder,
                            Role::Builder,  Role::Attacker, Role::Attacker, Role::Attacker,
                            Role::Attacker, Role::Attacker};

    int visionRadius = 5;

    int blockTypes = 2;
    int dispensersPerType = 2;
    int goalClusters = 2;
    int goalClusterSize = 9;
    double obstacleDensity = 0.10;

    int taskSizeMin = 1;
    int taskSizeMax = 3;
    int taskDuration = 100;
    int rewardBase = 10;
    int initialTasks = 2;
    int maxActiveTasks = 4;
    double taskRate = 0.05;

    double clearEventRate = 0.02;
    int clearEventMaxRadius = 3;
    int clearEventWarning = 5;
    int regenObstacles = 3;

    int disableDuration = 4;
    int clearRadius = 1;
    int energyStart = 100;
    int energyMax = 100;
    int clearEnergy = 30;
    int energyRegen = 1;

    int maxSteps = 500;

    int failTolerance = 8;
    int chunkSize = 5;
    int minSlack = 60;

    int entityCount() const { return static_cast<int>(teams.size()) * entitiesPerTeam; }
    Role roleOf(int indexInTeam) const { return roles.at(static_cast<std::size_t>(indexInTeam)); }

    // Throws Error(InvalidConfig) describing the first violated constraint.
    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

nlohmann::json to_json(const SimConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
SimConfig config_from_json(const nlohmann::json& j);
SimConfig load_config(const std::filesystem::path& path);

}  // namespace assemble
