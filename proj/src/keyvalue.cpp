#include "casimir/keyvalue.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "casimir/errors.hpp"

namespace casimir {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

bool KeyValueSection::has(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
}

std::optional<std::string> KeyValueSection::find(std::string_view key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e.value;
    return std::nullopt;
}

const KeyValueSection::Entry& KeyValueSection::entry(std::string_view key) const {
    for (const auto& e : entries_)
        if (e.key == key) return e;
    fail("missing required key '" + std::string(key) + "'", line_);
}

void KeyValueSection::fail(const std::string& msg, int line) const {
    std::ostringstream os;
    os << source_ << ':' << line << ": ";
    if (!name_.empty()) os << '[' << name_ << "] ";
    os << msg;
    throw ConfigError(os.str());
}

std::string KeyValueSection::get_string(std::string_view key) const { return entry(key).value; }

double KeyValueSection::get_double(std::string_view key) const {
    const auto& e = entry(key);
    const auto v = parse_number(e.value);
    if (!v) fail("key '" + e.key + "' expects a number, got '" + e.value + "'", e.line);
    return *v;
}

double KeyValueSection::get_double(std::string_view key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long KeyValueSection::get_int(std::string_view key, long long fallback) const {
    if (!has(key)) return fallback;
    const auto& e = entry(key);
    const double v = get_double(key);
    if (v != static_cast<double>(static_cast<long long>(v)))
        fail("key '" + e.key + "' expects an integer, got '" + e.value + "'", e.line);
    return static_cast<long long>(v);
}

bool KeyValueSection::get_bool(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& e = entry(key);
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    fail("key '" + e.key + "' expects true/false, got '" + e.value + "'", e.line);
}

std::vector<double> KeyValueSection::get_double_list(std::string_view key) const {
    const auto& e = entry(key);
    std::vector<double> out;
    std::string_view rest = e.value;
    if (trim(rest).empty()) return out;
    while (true) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        const auto v = parse_number(item);
        if (!v) fail("key '" + e.key + "' expects a comma-separated number list, got '" + e.value + "'", e.line);
        out.push_back(*v);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

void KeyValueSection::reject_unknown(std::initializer_list<std::string_view> allowed) const {
    for (const auto& e : entries_)
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end())
            fail("unknown key '" + e.key + "'", e.line);
}

void KeyValueSection::add(std::string key, std::string value, int line) {
    if (has(key)) fail("duplicate key '" + key + "'", line);
    entries_.push_back({std::move(key), std::move(value), line});
}

KeyValueDocument KeyValueDocument::parse(std::istream& in, const std::string& source_name) {
    KeyValueDocument doc;
    doc.source_ = source_name;
    doc.sections_.emplace_back("", source_name, 0);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(source_name + ":" + std::to_string(line_no) + ": malformed section header");
            doc.sections_.emplace_back(std::string(trim(line.substr(1, line.size() - 2))), source_name, line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty())
            throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
        doc.sections_.back().add(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                                 line_no);
    }
    return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return parse(in, path.string());
}

std::vector<const KeyValueSection*> KeyValueDocument::sections(std::string_view name) const {
    std::vector<const KeyValueSection*> out;
    for (const auto& s : sections_)
        if (s.name() == name && !name.empty()) out.push_back(&s);
    return out;
}

const KeyValueSection* KeyValueDocument::section(std::string_view name) const {
    const auto all = sections(name);
    if (all.size() > 1) throw ConfigError(source_ + ": section [" + std::string(name) + "] appears more than once");
    return all.empty() ? nullptr : all.front();
}

const KeyValueSection& KeyValueDocument::require_section(std::string_view name) const {
    const auto* s = section(name);
    if (!s) throw ConfigError(source_ + ": missing required section [" + std::string(name) + "]");
    return *s;
}

void KeyValueDocument::reject_unknown_sections(std::initializer_list<std::string_view> allowed) const {
    for (std::size_t i = 1; i < sections_.size(); ++i) {
        const auto& name = sections_[i].name();
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
            throw ConfigError(source_ + ": unknown section [" + name + "]");
    }
}

}  // namespace casimir
