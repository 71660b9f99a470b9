#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "scholartrace/common/time.hpp"

namespace scholartrace::ingest {

/// Participant identifier: exactly 32 lowercase hexadecimal characters.
/// The only identity key anywhere in the system.
class Uid {
public:
    static constexpr std::size_t kLength = 32;

    /// All-zero placeholder; still well formed.
    Uid() : value_(kLength, '0') {}

    /// nullopt unless `text` matches ^[0-9a-f]{32}$.
    static std::optional<Uid> parse(std::string_view text);

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const Uid&, const Uid&) = default;
    friend bool operator==(const Uid&, const Uid&) = default;

private:
    explicit Uid(std::string value) : value_(std::move(value)) {}
    std::string value_;
};

/// Lowercase hex MD5 digest (RFC 1321).
std::string md5_hex(std::string_view bytes);

/// MD5 of entropy ‖ iso8601(ts) ‖ salt, omitting absent parts. `attempt` > 0
/// appends "#<attempt>" to produce a fresh candidate after a collision.
/// With no salt and no timestamp this is the plain MD5 of the entropy bytes
/// (raw-digest mode, used to check the RFC 1321 test vectors).
Uid derive_uid(std::string_view entropy, std::optional<Timestamp> ts,
               const std::optional<std::string>& salt, int attempt = 0);

}  // namespace scholartrace::ingest

template <>
struct std::hash<scholartrace::ingest::Uid> {
    std::size_t operator()(const scholartrace::ingest::Uid& uid) const noexcept {
        return std::hash<std::string>{}(uid.str());
    }
};
