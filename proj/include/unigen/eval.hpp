#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "unigen/error.hpp"

namespace unigen {

/// A percentage rounded half-up to one decimal, held as integer tenths.
struct Percent {
    long long tenths = 0;

    double value() const { return static_cast<double>(tenths) / 10.0; }
    std::string str() const; // "93.8"
    bool operator==(const Percent&) const = default;
};

enum class EntryResult { Pass, Fail, Pending };

std::string_view to_string(EntryResult r);

struct MatrixEntry {
    std::string id;
    std::string description;
    EntryResult result = EntryResult::Pending;

    bool operator==(const MatrixEntry&) const = default;
};

struct InteractionMatrix {
    std::string game_name;
    std::vector<MatrixEntry> entries;

    bool operator==(const InteractionMatrix&) const = default;
};

struct EfficiencyRecord {
    std::string metric_name;
    double manual_value = 0;
    double assisted_value = 0;
    std::string units;
};

class PendingEntries : public Error {
public:
    explicit PendingEntries(std::vector<std::string> ids);
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::vector<std::string> ids_;
};

/// Error with the 1-based line of the offending row (codes DuplicateId,
/// MalformedRow, SyntaxError).
class MatrixError : public Error {
public:
    MatrixError(std::string code, int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// 100 * pass / total. Throws Error{"InvalidMatrix"} when total <= 0 or pass
/// is out of range.
Percent completeness(long long pass, long long total);
/// Throws PendingEntries.
Percent completeness(const InteractionMatrix& matrix);

/// 100 * (manual - assisted) / manual. Throws Error{"InvalidRecord"} unless
/// manual > 0 and assisted >= 0.
Percent improvement(double manual, double assisted);
Percent improvement(const EfficiencyRecord& record);

InteractionMatrix parse_matrix_json(std::string_view text);
/// Columns id,description,result; a matching header row is skipped.
InteractionMatrix parse_matrix_csv(std::string_view text, std::string game_name);

std::string serialize_matrix(const InteractionMatrix& matrix);

/// CSV when `csv` is set or the extension is .csv.
InteractionMatrix load_matrix(const std::filesystem::path& path, bool csv = false);
void save_matrix(const InteractionMatrix& matrix, const std::filesystem::path& path);

std::string render_report(const InteractionMatrix& matrix);

} // namespace unigen
