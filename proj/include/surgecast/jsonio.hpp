#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace surgecast::jsonio {

// 17 significant digits: enough to reconstruct any finite double exactly.
std::string format_double(double v);

// Streaming JSON writer with caller-controlled key order, so identical
// inputs serialize to identical bytes.
class Emitter {
public:
    Emitter& begin_object();
    Emitter& end_object();
    Emitter& begin_array();
    Emitter& end_array();
    Emitter& key(std::string_view k);
    Emitter& value(std::string_view v);
    Emitter& value(const char* v);
    Emitter& value(double v);
    Emitter& value(std::int64_t v);
    Emitter& value(std::uint64_t v);
    Emitter& value(int v);
    Emitter& value(bool v);
    Emitter& number_array(const std::vector<double>& vs);

    const std::string& str() const { return out_; }

private:
    void separate();
    std::string out_;
    std::vector<char> stack_;      // 'o' or 'a'
    std::vector<bool> has_items_;
    bool pending_key_ = false;
};

// Parses text, converting syntax failures (including truncation) into
// CorruptionError.
nlohmann::json parse_text(const std::string& text, const std::string& what);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

} // namespace surgecast::jsonio
