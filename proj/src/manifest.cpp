#include "memsnn/manifest.hpp"

#include "memsnn/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#ifndef MEMSNN_VERSION
#define MEMSNN_VERSION "unknown"
#endif

namespace memsnn {

namespace {

using DigestCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

DigestCtx new_sha256()
{
    DigestCtx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest init failed");
    }
    return ctx;
}

std::string finish_hex(EVP_MD_CTX* ctx)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, md.data(), &len) != 1) {
        throw std::runtime_error("sha256: digest final failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 0xf];
    }
    return out;
}

} // namespace

std::string_view code_version() { return MEMSNN_VERSION; }

std::string sha256_hex(std::string_view data)
{
    DigestCtx ctx = new_sha256();
    EVP_DigestUpdate(ctx.get(), data.data(), data.size());
    return finish_hex(ctx.get());
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    DigestCtx ctx = new_sha256();
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return finish_hex(ctx.get());
}

void write_manifest(const std::filesystem::path& dir, std::string_view experiment,
                    const Config& config, const std::vector<std::filesystem::path>& outputs,
                    const nlohmann::json& results)
{
    nlohmann::json m;
    m["experiment"] = experiment;
    m["version"] = code_version();
    m["config"] = to_ini(config);
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : outputs) {
        files.push_back({{"file", p.filename().string()},
                         {"sha256", sha256_file(p)},
                         {"bytes", std::filesystem::file_size(p)}});
    }
    m["outputs"] = files;
    m["results"] = results;

    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << m.dump(2) << '\n';
}

} // namespace memsnn
