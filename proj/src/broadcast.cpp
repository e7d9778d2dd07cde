#include "lloqss/broadcast.hpp"

#include <stdexcept>

namespace lloqss {

namespace {

std::vector<std::uint8_t> xor_all(std::span<const std::uint8_t> data,
                                  std::span<const std::vector<std::uint8_t>> keys) {
    for (const auto& key : keys)
        if (key.size() != data.size())
            throw std::invalid_argument("broadcast: key length mismatch");
    std::vector<std::uint8_t> out(data.begin(), data.end());
    for (const auto& key : keys)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= key[i];
    return out;
}

}  // namespace

std::vector<std::uint8_t> encode_broadcast(
    std::span<const std::uint8_t> message,
    std::span<const std::vector<std::uint8_t>> keys) {
    return xor_all(message, keys);
}

std::vector<std::uint8_t> decode_broadcast(
    std::span<const std::uint8_t> ciphertext,
    std::span<const std::vector<std::uint8_t>> keys) {
    return xor_all(ciphertext, keys);
}

}  // namespace lloqss
