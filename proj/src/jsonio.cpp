#include "surgecast/jsonio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "surgecast/error.hpp"

namespace surgecast::jsonio {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Emitter::separate() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!stack_.empty() && has_items_.back()) out_ += ',';
    if (!has_items_.empty()) has_items_.back() = true;
}

Emitter& Emitter::begin_object() {
    separate();
    out_ += '{';
    stack_.push_back('o');
    has_items_.push_back(false);
    return *this;
}

Emitter& Emitter::end_object() {
    out_ += '}';
    stack_.pop_back();
    has_items_.pop_back();
    return *this;
}

Emitter& Emitter::begin_array() {
    separate();
    out_ += '[';
    stack_.push_back('a');
    has_items_.push_back(false);
    return *this;
}

Emitter& Emitter::end_array() {
    out_ += ']';
    stack_.pop_back();
    has_items_.pop_back();
    return *this;
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

} // namespace

Emitter& Emitter::key(std::string_view k) {
    separate();
    append_escaped(out_, k);
    out_ += ':';
    pending_key_ = true;
    return *this;
}

Emitter& Emitter::value(std::string_view v) {
    separate();
    append_escaped(out_, v);
    return *this;
}

Emitter& Emitter::value(const char* v) { return value(std::string_view(v)); }

Emitter& Emitter::value(double v) {
    separate();
    out_ += format_double(v);
    return *this;
}

Emitter& Emitter::value(std::int64_t v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

Emitter& Emitter::value(std::uint64_t v) {
    separate();
    out_ += std::to_string(v);
    return *this;
}

Emitter& Emitter::value(int v) { return value(static_cast<std::int64_t>(v)); }

Emitter& Emitter::value(bool v) {
    separate();
    out_ += v ? "true" : "false";
    return *this;
}

Emitter& Emitter::number_array(const std::vector<double>& vs) {
    begin_array();
    for (double v : vs) value(v);
    return end_array();
}

nlohmann::json parse_text(const std::string& text, const std::string& what) {
    nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw CorruptionError(what + " is not valid JSON (corrupt or truncated)");
    }
    return parsed;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path);
    return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failure on " + path);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace surgecast::jsonio
