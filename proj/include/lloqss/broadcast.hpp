#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lloqss {

// XOR of the message with every key in turn. Decoding is the same
// operation, so a party holding all keys inverts it; any party missing one
// key sees only the missing key's XOR with a uniform-looking pad.
std::vector<std::uint8_t> encode_broadcast(
    std::span<const std::uint8_t> message,
    std::span<const std::vector<std::uint8_t>> keys);

std::vector<std::uint8_t> decode_broadcast(
    std::span<const std::uint8_t> ciphertext,
    std::span<const std::vector<std::uint8_t>> keys);

}  // namespace lloqss
