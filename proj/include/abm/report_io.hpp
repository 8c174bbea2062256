#pragma once

// report_io.hpp -- deterministic CSV/JSON emission. All floating-point
// values are formatted with 17 significant digits and objects keep
// insertion order, so identical inputs produce byte-identical files.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "abm/vec3.hpp"

namespace abm::io {

std::string format_sig17(double v);

// Minimal ordered JSON value. Numbers are stored pre-formatted.
class Json {
public:
    static Json object() { return Json(Object{}); }
    static Json array() { return Json(Array{}); }
    static Json number(double v) { return Json(RawNumber{format_sig17(v)}); }
    static Json integer(long long v) { return Json(RawNumber{std::to_string(v)}); }
    static Json string(std::string s) { return Json(std::move(s)); }
    static Json boolean(bool b) { return Json(b); }
    static Json vec3(const Vec3& v) {
        Json a = array();
        a.push(number(v.x)).push(number(v.y)).push(number(v.z));
        return a;
    }

    Json& add(const std::string& key, Json value);
    Json& push(Json value);
    std::string dump(int indent = 2) const;

private:
    struct RawNumber {
        std::string text;
    };
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;
    using Value = std::variant<bool, RawNumber, std::string, Array, Object>;

    explicit Json(Value v) : value_(std::move(v)) {}
    void dump_to(std::string& out, int indent, int depth) const;

    Value value_;
};

std::uint64_t fnv1a64(std::string_view s);
std::string hash_hex(std::string_view s);

// Timestamp honors SOURCE_DATE_EPOCH (reproducible-builds convention);
// without it a fixed epoch string keeps repeated runs byte-identical.
std::string manifest_timestamp();

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string tool_version;
    std::string timestamp;
    std::vector<std::string> outputs;
};

RunManifest make_manifest(const std::string& command, std::string_view canonical_config,
                          std::vector<std::string> outputs);
Json manifest_json(const RunManifest& m);
// "# key: value" lines for embedding the manifest at the top of CSV files.
std::vector<std::string> manifest_comments(const RunManifest& m);

struct CsvTable {
    std::vector<std::string> comments;  // emitted as '# ...' lines before the header
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string dump() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace abm::io
