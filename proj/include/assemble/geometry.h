#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace assemble {

// Grid offset or cell. North is -y, south is +y, west is -x, east is +x.
struct Vec2 {
    int x = 0;
    int y = 0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    constexpr bool operator==(const Vec2&) const = default;

    // Row-major: (y, x) lexicographic. All tie rules in the project use this order.
    constexpr std::strong_ordering operator<=>(const Vec2& o) const {
        if (auto c = y <=> o.y; c != 0) return c;
        return x <=> o.x;
    }
};

constexpr int manhattan(Vec2 v) { return (v.x < 0 ? -v.x : v.x) + (v.y < 0 ? -v.y : v.y); }
constexpr int manhattan(Vec2 a, Vec2 b) { return manhattan(a - b); }

enum class Direction : std::uint8_t { N, E, S, W };

inline constexpr std::array<Direction, 4> kDirections{Direction::N, Direction::E, Direction::S,
                                                      Direction::W};

constexpr Vec2 unit(Direction d) {
    switch (d) {
        case Direction::N: return {0, -1};
        case Direction::E: return {1, 0};
        case Direction::S: return {0, 1};
        case Direction::W: return {-1, 0};
    }
    return {};
}

constexpr Direction opposite(Direction d) {
    switch (d) {
        case Direction::N: return Direction::S;
        case Direction::E: return Direction::W;
        case Direction::S: return Direction::N;
        case Direction::W: return Direction::E;
    }
    return d;
}

constexpr std::optional<Direction> direction_of(Vec2 v) {
    for (Direction d : kDirections)
        if (unit(d) == v) return d;
    return std::nullopt;
}

enum class Rotation : std::uint8_t { Cw, Ccw };

// Quarter turn about the origin. With north = -y, clockwise maps (x, y) to (-y, x).
constexpr Vec2 rotate(Vec2 v, Rotation r) {
    return r == Rotation::Cw ? Vec2{-v.y, v.x} : Vec2{v.y, -v.x};
}

constexpr Rotation reverse(Rotation r) { return r == Rotation::Cw ? Rotation::Ccw : Rotation::Cw; }

char to_char(Direction d);
std::optional<Direction> parse_direction(std::string_view s);
std::string_view to_string(Rotation r);
std::optional<Rotation> parse_rotation(std::string_view s);

struct Vec2Hash {
    std::size_t operator()(Vec2 v) const noexcept {
        return std::hash<std::int64_t>{}((static_cast<std::int64_t>(v.x) << 32) ^
                                         static_cast<std::uint32_t>(v.y));
    }
};

}  // namespace assemble
