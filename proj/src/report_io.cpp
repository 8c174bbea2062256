#include "abm/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "abm/errors.hpp"
#include "abm/version.hpp"

namespace abm::io {

std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json& Json::add(const std::string& key, Json value) {
    auto* obj = std::get_if<Object>(&value_);
    if (!obj) throw std::logic_error("Json::add on a non-object");
    obj->emplace_back(key, std::move(value));
    return *this;
}

Json& Json::push(Json value) {
    auto* arr = std::get_if<Array>(&value_);
    if (!arr) throw std::logic_error("Json::push on a non-array");
    arr->push_back(std::move(value));
    return *this;
}

namespace {
void dump_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    out += '"';
}
}  // namespace

void Json::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (static_cast<std::size_t>(depth) + 1),
                          ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * static_cast<std::size_t>(depth),
                                ' ');
    if (const bool* b = std::get_if<bool>(&value_)) {
        out += *b ? "true" : "false";
    } else if (const RawNumber* n = std::get_if<RawNumber>(&value_)) {
        out += n->text;
    } else if (const std::string* s = std::get_if<std::string>(&value_)) {
        dump_string(out, *s);
    } else if (const Array* a = std::get_if<Array>(&value_)) {
        if (a->empty()) {
            out += "[]";
            return;
        }
        out += '[';
        for (std::size_t i = 0; i < a->size(); ++i) {
            out += (i ? ", " : "");
            (*a)[i].dump_to(out, indent, depth);
        }
        out += ']';
    } else {
        const Object& o = std::get<Object>(value_);
        if (o.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < o.size(); ++i) {
            out += pad;
            dump_string(out, o[i].first);
            out += ": ";
            o[i].second.dump_to(out, indent, depth + 1);
            if (i + 1 < o.size()) out += ',';
            out += '\n';
        }
        out += close_pad;
        out += '}';
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    out += '\n';
    return out;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::string_view s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

std::string manifest_timestamp() {
    long long epoch = 0;
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) epoch = std::atoll(env);
    const std::time_t t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest make_manifest(const std::string& command, std::string_view canonical_config,
                          std::vector<std::string> outputs) {
    RunManifest m;
    m.command = command;
    m.config_hash = hash_hex(canonical_config);
    m.tool_version = abm::tool_version;
    m.timestamp = manifest_timestamp();
    m.outputs = std::move(outputs);
    return m;
}

Json manifest_json(const RunManifest& m) {
    Json j = Json::object();
    j.add("command", Json::string(m.command));
    j.add("config_hash", Json::string(m.config_hash));
    j.add("tool_version", Json::string(m.tool_version));
    j.add("timestamp", Json::string(m.timestamp));
    Json outs = Json::array();
    for (const auto& o : m.outputs) outs.push(Json::string(o));
    j.add("outputs", std::move(outs));
    return j;
}

std::vector<std::string> manifest_comments(const RunManifest& m) {
    std::vector<std::string> lines;
    lines.push_back("# command: " + m.command);
    lines.push_back("# config_hash: " + m.config_hash);
    lines.push_back("# tool_version: " + m.tool_version);
    lines.push_back("# timestamp: " + m.timestamp);
    return lines;
}

std::string CsvTable::dump() const {
    std::string out;
    for (const auto& c : comments) {
        out += c;
        out += '\n';
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += (i ? "," : "");
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "");
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw abm::Error("cannot open for writing: " + path);
    f << content;
    if (!f) throw abm::Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw abm::Error("cannot open for reading: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace abm::io
