#include "manifest.hpp"

#include "qpl/numerics/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <memory>

namespace qpl::cli {

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", md[k]);
        hex += buf;
    }
    return hex;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

Json Manifest::to_json() const {
    Json a = Json::array();
    for (const auto& [k, v] : args) a.push_back({k, v});
    Json o = Json::array();
    for (const auto& [f, h] : outputs) o.push_back({{"file", f}, {"sha256", h}});
    return {{"tool", "qpl"}, {"command", command}, {"args", a}, {"outputs", o}};
}

Manifest Manifest::from_json(const Json& j) {
    Manifest m;
    try {
        if (j.at("tool") != "qpl") throw UsageError("not a qpl manifest");
        m.command = j.at("command").get<std::string>();
        for (const auto& p : j.at("args")) m.args.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
        for (const auto& o : j.at("outputs")) {
            m.outputs.emplace_back(o.at("file").get<std::string>(), o.at("sha256").get<std::string>());
        }
    } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

}  // namespace qpl::cli
