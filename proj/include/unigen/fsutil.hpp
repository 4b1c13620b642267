#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace unigen {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path);

// Writes through a sibling temp file and renames over the target, so readers
// never observe a partially written file. Parent directories are created.
void write_file_atomic(const fs::path& path, std::string_view content);

// Writes only when the on-disk content differs. Returns true if written.
bool write_file_if_changed(const fs::path& path, std::string_view content);

// Normalises a forward-slash relative path. Returns false when the path is
// absolute, empty, or climbs above its root through "..".
bool normalize_relative(std::string_view path, std::string& out);

// Exclusive advisory lock held for the lifetime of the object. Without
// `wait`, throws Error{"Busy"} when another holder owns the lock.
class FileLock {
public:
    explicit FileLock(const fs::path& lock_path, bool wait = false);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::string utc_now_iso8601();

} // namespace unigen
