#include "assemble/config.h"

#include <fstream>
#include <set>

#include "assemble/error.h"

namespace assemble {

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Builder: return "builder";
        case Role::Attacker: return "attacker";
        case Role::Idle: return "idle";
    }
    return "?";
}

Role parse_role(std::string_view s) {
    if (s == "builder") return Role::Builder;
    if (s == "attacker") return Role::Attacker;
    if (s == "idle") return Role::Idle;
    throw Error(ErrorCode::InvalidConfig, "unknown role '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, what);
}

}  // namespace

void SimConfig::validate() const {
    require(width >= 10 && height >= 10, "width and height must be at least 10");
    require(!teams.empty(), "at least one team required");
    std::set<std::string> names(teams.begin(), teams.end());
    require(names.size() == teams.size(), "team names must be unique");
    require(entitiesPerTeam >= 0, "entitiesPerTeam must be non-negative");
    require(static_cast<int>(roles.size()) >= entitiesPerTeam, "roles must cover every entity");
    require(visionRadius >= 1, "visionRadius must be positive");
    require(blockTypes >= 1, "blockTypes must be positive");
    require(dispensersPerType >= 1, "every block type needs at least one dispenser");
    require(goalClusters >= 1, "at least one goal cluster required");
    require(goalClusterSize >= 1, "goalClusterSize must be positive");
    require(obstacleDensity >= 0.0 && obstacleDensity < 0.6, "obstacleDensity out of range");
    require(taskSizeMin >= 1 && taskSizeMax >= taskSizeMin, "invalid task size range");
    require(taskDuration >= 1 && rewardBase >= 1, "taskDuration and rewardBase must be positive");
    require(initialTasks >= 0 && maxActiveTasks >= 0, "task counts must be non-negative");
    require(taskRate >= 0.0 && taskRate <= 1.0, "taskRate must be a probability");
    require(clearEventRate >= 0.0 && clearEventRate <= 1.0, "clearEventRate must be a probability");
    require(clearEventMaxRadius >= 1 && clearEventWarning >= 0 && regenObstacles >= 0,
            "invalid clear event parameters");
    require(disableDuration >= 1, "disableDuration must be positive");
    require(clearRadius >= 0, "clearRadius must be non-negative");
    require(energyStart >= 0 && energyMax >= energyStart && clearEnergy >= 0 && energyRegen >= 0,
            "invalid energy parameters");
    require(maxSteps >= 0, "maxSteps must be non-negative");
    require(failTolerance >= 1 && chunkSize >= 1 && minSlack >= 0, "invalid agent parameters");
}

nlohmann::json to_json(const SimConfig& c) {
    nlohmann::json roles = nlohmann::json::array();
    for (Role r : c.roles) roles.push_back(std::string(to_string(r)));
    return {
        {"seed", c.seed},
        {"width", c.width},
        {"height", c.height},
        {"teams", c.teams},
        {"entitiesPerTeam", c.entitiesPerTeam},
        {"roles", roles},
        {"visionRadius", c.visionRadius},
        {"blockTypes", c.blockTypes},
        {"dispensersPerType", c.dispensersPerType},
        {"goalClusters", c.goalClusters},
        {"goalClusterSize", c.goalClusterSize},
        {"obstacleDensity", c.obstacleDensity},
        {"taskSizeMin", c.taskSizeMin},
        {"taskSizeMax", c.taskSizeMax},
        {"taskDuration", c.taskDuration},
        {"rewardBase", c.rewardBase},
        {"initialTasks", c.initialTasks},
        {"maxActiveTasks", c.maxActiveTasks},
        {"taskRate", c.taskRate},
        {"clearEventRate", c.clearEventRate},
        {"clearEventMaxRadius", c.clearEventMaxRadius},
        {"clearEventWarning", c.clearEventWarning},
        {"regenObstacles", c.regenObstacles},
        {"disableDuration", c.disableDuration},
        {"clearRadius", c.clearRadius},
        {"energyStart", c.energyStart},
        {"energyMax", c.energyMax},
        {"clearEnergy", c.clearEnergy},
        {"energyRegen", c.energyRegen},
        {"maxSteps", c.maxSteps},
        {"failTolerance", c.failTolerance},
        {"chunkSize", c.chunkSize},
        {"minSlack", c.minSlack},
    };
}

SimConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    SimConfig c;
    const nlohmann::json defaults = to_json(c);
    for (const auto& [key, _] : j.items())
        if (!defaults.contains(key)) throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");

    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) j.at(key).get_to(field);
        };
        get("seed", c.seed);
        get("width", c.width);
        get("height", c.height);
        get("teams", c.teams);
        get("entitiesPerTeam", c.entitiesPerTeam);
        if (j.contains("roles")) {
            c.roles.clear();
            for (const auto& r : j.at("roles")) c.roles.push_back(parse_role(r.get<std::string>()));
        }
        get("visionRadius", c.visionRadius);
        get("blockTypes", c.blockTypes);
        get("dispensersPerType", c.dispensersPerType);
        get("goalClusters", c.goalClusters);
        get("goalClusterSize", c.goalClusterSize);
        get("obstacleDensity", c.obstacleDensity);
        get("taskSizeMin", c.taskSizeMin);
        get("taskSizeMax", c.taskSizeMax);
        get("taskDuration", c.taskDuration);
        get("rewardBase", c.rewardBase);
        get("initialTasks", c.initialTasks);
        get("maxActiveTasks", c.maxActiveTasks);
        get("taskRate", c.taskRate);
        get("clearEventRate", c.clearEventRate);
        get("clearEventMaxRadius", c.clearEventMaxRadius);
        get("clearEventWarning", c.clearEventWarning);
        get("regenObstacles", c.regenObstacles);
        get("disableDuration", c.disableDuration);
        get("clearRadius", c.clearRadius);
        get("energyStart", c.energyStart);
        get("energyMax", c.energyMax);
        get("clearEnergy", c.clearEnergy);
        get("energyRegen", c.energyRegen);
        get("maxSteps", c.maxSteps);
        get("failTolerance", c.failTolerance);
        get("chunkSize", c.chunkSize);
        get("minSlack", c.minSlack);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    c.validate();
    return c;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, e.what());
    }
    return config_from_json(j);
}

}  // namespace assemble
