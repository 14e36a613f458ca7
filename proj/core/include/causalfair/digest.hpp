#pragma once

#include <cstdint>
#include <string>

namespace causalfair {

/// Incremental SHA-256, used for fixture and dataset digests.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(const std::string& s) { update(s.data(), s.size()); }
    std::string hex_digest();   // finalizes; further updates are invalid

    static std::string of(const std::string& s);

private:
    void process_block(const std::uint8_t* block);
    std::uint32_t h_[8];
    std::uint8_t buf_[64];
    std::size_t buf_len_ = 0;
    std::uint64_t total_len_ = 0;
};

} // namespace causalfair
