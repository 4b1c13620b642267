#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace unigen {

struct EmbeddedFile {
    std::string_view relative_path; // e.g. "Assets/Runtime/ReflectionHelper.cs"
    std::string_view content;
};

/// Files from unity-support/, embedded byte-exactly at build time.
const std::vector<EmbeddedFile>& support_asset_table();

struct SupportAsset {
    std::string relative_path;
    std::string source;
    std::string version;
};

/// Parses "vX.Y.Z" out of the "// unigen-support vX.Y.Z" header line.
/// Throws Error{"SupportAssetInvalid"} when the header is missing.
std::string support_version(std::string_view source);

std::vector<SupportAsset> support_assets();

} // namespace unigen
