#include "unigen/prompts.hpp"

#include <cstdlib>

#include "unigen/error.hpp"
#include "unigen/fsutil.hpp"

namespace unigen {

PromptLibrary::PromptLibrary(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
        throw Error("ConfigError", "prompt directory not found: " + dir_.string());
    }
}

std::filesystem::path PromptLibrary::default_dir() {
    if (const char* env = std::getenv("UNIGEN_PROMPTS_DIR"); env && *env) return env;
#ifdef UNIGEN_DEFAULT_PROMPTS_DIR
    return UNIGEN_DEFAULT_PROMPTS_DIR;
#else
    return "prompts";
#endif
}

std::string PromptLibrary::raw(std::string_view name) const {
    const auto path = dir_ / std::string(name);
    if (!std::filesystem::is_regular_file(path)) {
        throw Error("ConfigError", "prompt template missing: " + path.string());
    }
    return read_file(path);
}

std::string PromptLibrary::render(std::string_view name, const PromptSlots& slots) const {
    return fill_slots(raw(name), slots);
}

std::string fill_slots(std::string_view text, const PromptSlots& slots) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '{') {
            const std::size_t close = text.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto it = slots.find(std::string(text.substr(i + 1, close - i - 1)));
                if (it != slots.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(text[i++]);
    }
    return out;
}

} // namespace unigen
