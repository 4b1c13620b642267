#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace unigen {

using PromptSlots = std::map<std::string, std::string>;

/// Prompt templates loaded from text files so they can be edited without a
/// rebuild. Slots are written `{name}`; unknown braces are left untouched.
class PromptLibrary {
public:
    explicit PromptLibrary(std::filesystem::path dir);

    /// UNIGEN_PROMPTS_DIR if set, otherwise the directory baked in at build time.
    static std::filesystem::path default_dir();

    const std::filesystem::path& dir() const { return dir_; }
    std::string raw(std::string_view name) const;
    std::string render(std::string_view name, const PromptSlots& slots) const;

private:
    std::filesystem::path dir_;
};

std::string fill_slots(std::string_view text, const PromptSlots& slots);

} // namespace unigen
