#include "unigen/support_assets.hpp"

#include <cctype>

#include "unigen/error.hpp"

namespace unigen {

std::string support_version(std::string_view source) {
    constexpr std::string_view prefix = "// unigen-support v";
    if (source.substr(0, prefix.size()) != prefix) {
        throw Error("SupportAssetInvalid", "support asset lacks the version header");
    }
    std::size_t end = prefix.size();
    while (end < source.size() && (std::isdigit(static_cast<unsigned char>(source[end])) || source[end] == '.')) ++end;
    if (end == prefix.size()) throw Error("SupportAssetInvalid", "support asset header has no version");
    return std::string(source.substr(prefix.size(), end - prefix.size()));
}

std::vector<SupportAsset> support_assets() {
    std::vector<SupportAsset> out;
    for (const auto& f : support_asset_table()) {
        out.push_back({std::string(f.relative_path), std::string(f.content), support_version(f.content)});
    }
    return out;
}

} // namespace unigen
