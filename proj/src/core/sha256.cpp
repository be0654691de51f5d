#include "specfid/core/sha256.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace specfid {

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int md_len = 0;
    EVP_Digest(data.data(), data.size(), md.data(), &md_len, EVP_sha256(), nullptr);
    std::string out;
    out.reserve(md_len * 2);
    char buf[3];
    for (unsigned int i = 0; i < md_len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", md[i]);
        out += buf;
    }
    return out;
}

}  // namespace specfid
