#include "scholartrace/ingest/uid.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

#include "scholartrace/common/text.hpp"

namespace scholartrace::ingest {

std::optional<Uid> Uid::parse(std::string_view text) {
    if (text.size() != kLength || !is_lower_hex(text)) return std::nullopt;
    return Uid{std::string{text}};
}

std::string md5_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_md5(), nullptr) != 1) {
        throw std::runtime_error("md5 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0F]);
    }
    return out;
}

Uid derive_uid(std::string_view entropy, std::optional<Timestamp> ts,
               const std::optional<std::string>& salt, int attempt) {
    std::string input{entropy};
    if (ts) input += format_iso8601(*ts);
    if (salt) input += *salt;
    if (attempt > 0) input += "#" + std::to_string(attempt);
    return *Uid::parse(md5_hex(input));
}

}  // namespace scholartrace::ingest
