#include "unigen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "unigen/blueprint.hpp"
#include "unigen/fsutil.hpp"

namespace unigen {

namespace {

std::optional<EntryResult> result_from_string(std::string_view s) {
    std::string lower(s);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "pass") return EntryResult::Pass;
    if (lower == "fail") return EntryResult::Fail;
    if (lower == "pending") return EntryResult::Pending;
    return std::nullopt;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

int line_of(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line on which each element of the top-level "entries" array starts.
std::vector<int> entry_lines(std::string_view text) {
    std::vector<int> lines;
    std::size_t depth = 0;
    std::string last_key;
    std::string current;
    bool in_string = false;
    bool escaped = false;
    bool in_entries = false;
    bool expecting = false;
    int line = 1;
    for (char c : text) {
        if (c == '\n') ++line;
        if (in_string) {
            if (escaped) {
                escaped = false;
                current.push_back(c);
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
                if (depth == 1) last_key = current;
            } else {
                current.push_back(c);
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        const bool at_element_level = in_entries && depth == 2;
        if (at_element_level && c == ',') {
            expecting = true;
            continue;
        }
        if (at_element_level && expecting && c != ']') {
            lines.push_back(line);
            expecting = false;
        }
        switch (c) {
        case '"':
            in_string = true;
            current.clear();
            break;
        case '{':
        case '[':
            ++depth;
            if (c == '[' && depth == 2 && last_key == "entries") {
                in_entries = true;
                expecting = true;
            }
            break;
        case '}':
        case ']':
            if (depth > 0) --depth;
            if (depth < 2) in_entries = false;
            break;
        default:
            break;
        }
    }
    return lines;
}

void check_entry(const MatrixEntry& e, int line) {
    if (!is_identifier(e.id)) throw MatrixError("MalformedRow", line, "entry id '" + e.id + "' is not an identifier");
}

void check_duplicates(const std::vector<MatrixEntry>& entries, const std::vector<int>& lines) {
    std::map<std::string, int> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto [it, fresh] = seen.emplace(entries[i].id, lines[i]);
        if (!fresh) {
            throw MatrixError("DuplicateId", lines[i],
                              "duplicate id '" + entries[i].id + "' (first on line " + std::to_string(it->second) + ")");
        }
    }
}

std::string pad(const std::string& s, std::size_t width) { return s + std::string(width - std::min(width, s.size()), ' '); }

} // namespace

std::string Percent::str() const {
    const long long magnitude = tenths < 0 ? -tenths : tenths;
    return (tenths < 0 ? "-" : "") + std::to_string(magnitude / 10) + "." + std::to_string(magnitude % 10);
}

std::string_view to_string(EntryResult r) {
    switch (r) {
    case EntryResult::Pass: return "pass";
    case EntryResult::Fail: return "fail";
    case EntryResult::Pending: return "pending";
    }
    return "pending";
}

PendingEntries::PendingEntries(std::vector<std::string> ids)
    : Error("PendingEntries",
            [&] {
                std::string msg = "completeness undefined, pending entries:";
                for (const auto& id : ids) msg += " " + id;
                return msg;
            }()),
      ids_(std::move(ids)) {}

MatrixError::MatrixError(std::string code, int line, const std::string& message)
    : Error(std::move(code), "line " + std::to_string(line) + ": " + message), line_(line) {}

Percent completeness(long long pass, long long total) {
    if (total <= 0 || pass < 0 || pass > total) {
        throw Error("InvalidMatrix", "need 0 <= pass <= total and total > 0, got " + std::to_string(pass) + "/" +
                                         std::to_string(total));
    }
    // round(1000 p / t) half-up, in integers
    return {(2000 * pass + total) / (2 * total)};
}

Percent completeness(const InteractionMatrix& matrix) {
    std::vector<std::string> pending;
    long long pass = 0;
    for (const auto& e : matrix.entries) {
        if (e.result == EntryResult::Pending) pending.push_back(e.id);
        if (e.result == EntryResult::Pass) ++pass;
    }
    if (!pending.empty()) throw PendingEntries(std::move(pending));
    return completeness(pass, static_cast<long long>(matrix.entries.size()));
}

Percent improvement(double manual, double assisted) {
    if (!std::isfinite(manual) || !std::isfinite(assisted) || manual <= 0 || assisted < 0) {
        throw Error("InvalidRecord", "need manual > 0 and assisted >= 0");
    }
    const double tenths = 1000.0 * (manual - assisted) / manual;
    // Tolerance absorbs binary representation error on exact halves.
    return {static_cast<long long>(std::floor(tenths + 0.5 + 1e-9))};
}

Percent improvement(const EfficiencyRecord& record) { return improvement(record.manual_value, record.assisted_value); }

InteractionMatrix parse_matrix_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MatrixError("SyntaxError", line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        throw MatrixError("MalformedRow", 1, "expected an object with an \"entries\" array");
    }
    InteractionMatrix m;
    if (doc.contains("gameName")) {
        if (!doc["gameName"].is_string()) throw MatrixError("MalformedRow", 1, "gameName must be a string");
        m.game_name = doc["gameName"].get<std::string>();
    }
    std::vector<int> lines = entry_lines(text);
    lines.resize(doc["entries"].size(), lines.empty() ? 1 : lines.back());
    for (std::size_t i = 0; i < doc["entries"].size(); ++i) {
        const auto& row = doc["entries"][i];
        const int line = lines[i];
        if (!row.is_object()) throw MatrixError("MalformedRow", line, "entry must be an object");
        for (const char* key : {"id", "description", "result"}) {
            if (!row.contains(key) || !row[key].is_string()) {
                throw MatrixError("MalformedRow", line, std::string("entry needs a string \"") + key + "\"");
            }
        }
        MatrixEntry e;
        e.id = row["id"].get<std::string>();
        e.description = row["description"].get<std::string>();
        auto result = result_from_string(row["result"].get<std::string>());
        if (!result) throw MatrixError("MalformedRow", line, "result must be pass, fail or pending");
        e.result = *result;
        check_entry(e, line);
        m.entries.push_back(std::move(e));
    }
    check_duplicates(m.entries, lines);
    return m;
}

InteractionMatrix parse_matrix_csv(std::string_view text, std::string game_name) {
    struct Row {
        std::vector<std::string> fields;
        int line;
    };
    std::vector<Row> rows;
    Row row{{}, 1};
    std::string field;
    bool in_quotes = false;
    bool quoted = false;
    int line = 1;
    auto end_field = [&] {
        row.fields.push_back(quoted ? field : trim(field));
        field.clear();
        quoted = false;
    };
    auto end_row = [&](int next_line) {
        end_field();
        const bool blank = row.fields.size() == 1 && row.fields[0].empty();
        if (!blank) rows.push_back(std::move(row));
        row = Row{{}, next_line};
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            in_quotes = true;
            quoted = true;
            field.clear();
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            ++line;
            end_row(line);
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    if (in_quotes) throw MatrixError("MalformedRow", row.line, "unterminated quoted field");
    end_row(line);

    InteractionMatrix m;
    m.game_name = std::move(game_name);
    std::vector<int> lines;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        if (r.fields.size() != 3) {
            throw MatrixError("MalformedRow", r.line,
                              "expected 3 fields (id,description,result), got " + std::to_string(r.fields.size()));
        }
        if (i == 0 && r.fields[0] == "id" && r.fields[1] == "description" && r.fields[2] == "result") continue;
        auto result = result_from_string(r.fields[2]);
        if (!result) throw MatrixError("MalformedRow", r.line, "result must be pass, fail or pending");
        MatrixEntry e{r.fields[0], r.fields[1], *result};
        check_entry(e, r.line);
        m.entries.push_back(std::move(e));
        lines.push_back(r.line);
    }
    check_duplicates(m.entries, lines);
    return m;
}

std::string serialize_matrix(const InteractionMatrix& matrix) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : matrix.entries) {
        nlohmann::ordered_json j;
        j["id"] = e.id;
        j["description"] = e.description;
        j["result"] = std::string(to_string(e.result));
        entries.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["gameName"] = matrix.game_name;
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

InteractionMatrix load_matrix(const std::filesystem::path& path, bool csv) {
    const std::string text = read_file(path);
    if (csv || path.extension() == ".csv") return parse_matrix_csv(text, path.stem().string());
    return parse_matrix_json(text);
}

void save_matrix(const InteractionMatrix& matrix, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_matrix(matrix));
}

std::string render_report(const InteractionMatrix& matrix) {
    std::size_t id_w = 2;
    std::size_t desc_w = 11;
    for (const auto& e : matrix.entries) {
        id_w = std::max(id_w, e.id.size());
        desc_w = std::max(desc_w, e.description.size());
    }
    std::ostringstream out;
    out << "Interaction matrix: " << (matrix.game_name.empty() ? std::string("(unnamed)") : matrix.game_name) << "\n\n";
    out << pad("id", id_w) << "  " << pad("description", desc_w) << "  result\n";
    out << std::string(id_w, '-') << "  " << std::string(desc_w, '-') << "  -------\n";
    long long pass = 0;
    std::vector<std::string> pending;
    for (const auto& e : matrix.entries) {
        out << pad(e.id, id_w) << "  " << pad(e.description, desc_w) << "  " << to_string(e.result) << "\n";
        if (e.result == EntryResult::Pass) ++pass;
        if (e.result == EntryResult::Pending) pending.push_back(e.id);
    }
    out << "\n";
    if (matrix.entries.empty()) {
        out << "Completeness: undefined (no entries)\n";
    } else if (!pending.empty()) {
        out << "Completeness: undefined (" << pending.size() << " pending)\n";
    } else {
        out << "Completeness: " << completeness(matrix).str() << "% (" << pass << "/" << matrix.entries.size() << ")\n";
    }
    return out.str();
}

} // namespace unigen
