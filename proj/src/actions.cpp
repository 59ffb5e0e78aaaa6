#include "assemble/actions.h"

#include <charconv>
#include <vector>

#include "assemble/error.h"

namespace assemble {

bool ActionRequest::operator==(const ActionRequest& o) const {
    if (type != o.type) return false;
    switch (type) {
        case ActionType::Skip: return true;
        case ActionType::Move:
        case ActionType::Attach:
        case ActionType::Detach:
        case ActionType::Request: return dir == o.dir;
        case ActionType::Rotate: return rotation == o.rotation;
        case ActionType::Connect: return partner == o.partner && offset == o.offset;
        case ActionType::Clear: return offset == o.offset;
        case ActionType::Submit: return task == o.task;
    }
    return false;
}

std::string_view to_string(ActionType t) {
    switch (t) {
        case ActionType::Skip: return "skip";
        case ActionType::Move: return "move";
        case ActionType::Rotate: return "rotate";
        case ActionType::Attach: return "attach";
        case ActionType::Detach: return "detach";
        case ActionType::Connect: return "connect";
        case ActionType::Request: return "request";
        case ActionType::Clear: return "clear";
        case ActionType::Submit: return "submit";
    }
    return "?";
}

std::string_view to_string(ActionResult r) {
    switch (r) {
        case ActionResult::Success: return "success";
        case ActionResult::FailedBlocked: return "failed_blocked";
        case ActionResult::FailedPartner: return "failed_partner";
        case ActionResult::FailedTarget: return "failed_target";
        case ActionResult::FailedResources: return "failed_resources";
        case ActionResult::FailedDeadline: return "failed_deadline";
        case ActionResult::FailedInvalid: return "failed_invalid";
    }
    return "?";
}

ActionResult parse_action_result(std::string_view s) {
    for (auto r : {ActionResult::Success, ActionResult::FailedBlocked, ActionResult::FailedPartner,
                   ActionResult::FailedTarget, ActionResult::FailedResources,
                   ActionResult::FailedDeadline, ActionResult::FailedInvalid})
        if (to_string(r) == s) return r;
    throw Error(ErrorCode::MalformedTrace, "unknown action result '" + std::string(s) + "'");
}

std::string to_string(const ActionRequest& a) {
    std::string out(to_string(a.type));
    switch (a.type) {
        case ActionType::Skip: break;
        case ActionType::Move:
        case ActionType::Attach:
        case ActionType::Detach:
        case ActionType::Request: out += '('; out += to_char(a.dir); out += ')'; break;
        case ActionType::Rotate: out += "(" + std::string(to_string(a.rotation)) + ")"; break;
        case ActionType::Connect:
            out += "(" + std::to_string(a.partner) + "," + std::to_string(a.offset.x) + "," +
                   std::to_string(a.offset.y) + ")";
            break;
        case ActionType::Clear:
            out += "(" + std::to_string(a.offset.x) + "," + std::to_string(a.offset.y) + ")";
            break;
        case ActionType::Submit: out += "(" + a.task + ")"; break;
    }
    return out;
}

namespace {

[[noreturn]] void bad_action(std::string_view s) {
    throw Error(ErrorCode::MalformedTrace, "cannot parse action '" + std::string(s) + "'");
}

int parse_int(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) bad_action(whole);
    return v;
}

std::vector<std::string_view> split_args(std::string_view args) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = args.find(',', start);
        out.push_back(args.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

ActionRequest parse_action(std::string_view s) {
    auto open = s.find('(');
    std::string_view name = s.substr(0, open);
    std::string_view args;
    if (open != std::string_view::npos) {
        if (s.back() != ')') bad_action(s);
        args = s.substr(open + 1, s.size() - open - 2);
    }
    auto dir = [&] {
        auto d = parse_direction(args);
        if (!d) bad_action(s);
        return *d;
    };
    if (name == "skip") return ActionRequest::skip();
    if (name == "move") return ActionRequest::move(dir());
    if (name == "attach") return ActionRequest::attach(dir());
    if (name == "detach") return ActionRequest::detach(dir());
    if (name == "request") return ActionRequest::request(dir());
    if (name == "rotate") {
        auto r = parse_rotation(args);
        if (!r) bad_action(s);
        return ActionRequest::rotate(*r);
    }
    if (name == "connect") {
        auto parts = split_args(args);
        if (parts.size() != 3) bad_action(s);
        return ActionRequest::connect(parse_int(parts[0], s),
                                      {parse_int(parts[1], s), parse_int(parts[2], s)});
    }
    if (name == "clear") {
        auto parts = split_args(args);
        if (parts.size() != 2) bad_action(s);
        return ActionRequest::clear({parse_int(parts[0], s), parse_int(parts[1], s)});
    }
    if (name == "submit") {
        if (args.empty()) bad_action(s);
        return ActionRequest::submit(std::string(args));
    }
    bad_action(s);
}

}  // namespace assemble
