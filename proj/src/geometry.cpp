#include "assemble/geometry.h"

#include "assemble/error.h"

namespace assemble {

char to_char(Direction d) {
    switch (d) {
        case Direction::N: return 'n';
        case Direction::E: return 'e';
        case Direction::S: return 's';
        case Direction::W: return 'w';
    }
    return '?';
}

std::optional<Direction> parse_direction(std::string_view s) {
    if (s == "n") return Direction::N;
    if (s == "e") return Direction::E;
    if (s == "s") return Direction::S;
    if (s == "w") return Direction::W;
    return std::nullopt;
}

std::string_view to_string(Rotation r) { return r == Rotation::Cw ? "cw" : "ccw"; }

std::optional<Rotation> parse_rotation(std::string_view s) {
    if (s == "cw") return Rotation::Cw;
    if (s == "ccw") return Rotation::Ccw;
    return std::nullopt;
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidConfig: return "invalid-config";
        case ErrorCode::UnknownAgent: return "unknown-agent";
        case ErrorCode::Unplannable: return "unplannable";
        case ErrorCode::InconsistentUpdate: return "inconsistent-update";
        case ErrorCode::MalformedActions: return "malformed-actions";
        case ErrorCode::MalformedTrace: return "malformed-trace";
        case ErrorCode::StepOutOfRange: return "step-out-of-range";
        case ErrorCode::IoError: return "io-error";
    }
    return "error";
}

}  // namespace assemble
