#pragma once

#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "assemble/attachments.h"
#include "assemble/identify.h"
#include "assemble/map_model.h"
#include "assemble/percepts.h"

namespace assemble {

// Everything one agent knows at one step. Published containers never change.
struct AgentContainer {
    std::string name;
    int currentStep = -1;
    VirtualPosition virtualPos;
    RawPerceptSet raw;
    std::shared_ptr<const MapModel> map;
    std::map<std::string, TranslationVector> identified;  // peer -> T(peer -> me)
    AttachmentModel attachments;
};

// Mutable per-agent state owned by the ingestion context.
struct AgentWorkspace {
    std::string name;
    RawPerceptSet raw;
    VirtualPosition virtualPos;
    MapModel map;
    std::map<std::string, TranslationVector> identified;
    AttachmentModel attachments;
    int ingestedStep = -1;
};

using PerceptBatch = std::vector<std::pair<std::string, RawPerceptSet>>;

// Boundary to whatever produces percepts; the runner adapts the in-process engine.
class PerceptSource {
public:
    virtual ~PerceptSource() = default;
    virtual PerceptBatch poll() = 0;
};

struct IdentificationEvent {
    int step = 0;
    std::string a;
    std::string b;
    TranslationVector translation;  // T(b -> a)
    bool operator==(const IdentificationEvent&) const = default;
};

// Records the pair on both sides and exchanges full map models.
void on_identified(AgentWorkspace& a, AgentWorkspace& b, TranslationVector bToA);

// Identification from this step's mutual sightings, then the incremental push of
// freshly observed cells to identified peers. `agents` must all belong to one team.
std::vector<IdentificationEvent> synchronize_team(std::vector<AgentWorkspace*>& agents, int step);

class PerceptPipeline {
public:
    using Hook = std::function<void(std::vector<AgentWorkspace*>&, int step)>;

    explicit PerceptPipeline(const std::vector<std::string>& agents);

    // Ingests one step. The hook runs after every agent is parsed and before
    // anything is published. Returns false when the batch's step was already ingested.
    bool poll_and_update(PerceptSource& source, const Hook& hook = {});
    bool ingest(const PerceptBatch& batch, const Hook& hook = {});

    // Blocks until `step` is published. Throws Error(UnknownAgent), or
    // Error(StepOutOfRange) for steps that are no longer retained.
    std::shared_ptr<const AgentContainer> get_container(const std::string& agent, int step) const;
    std::shared_ptr<const AgentContainer> latest(const std::string& agent) const;
    int ready_step() const;

    // Blocks that a pending connect will bring in; consumed by the next ingestion.
    void register_gained(const std::string& agent, std::vector<GainedBlock> gained);

    std::size_t parse_count(const std::string& agent) const;
    const std::vector<std::string>& agents() const { return names_; }

private:
    std::size_t index_of(const std::string& agent) const;

    std::vector<std::string> names_;
    std::vector<AgentWorkspace> work_;
    std::vector<std::vector<GainedBlock>> gained_;
    std::vector<std::size_t> parses_;

    mutable std::mutex mutex_;
    mutable std::condition_variable ready_;
    int readyStep_ = -1;
    // Published containers for the latest two steps, keyed by step.
    std::map<int, std::vector<std::shared_ptr<const AgentContainer>>> published_;
};

}  // namespace assemble
