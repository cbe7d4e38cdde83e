#pragma once

// Minimal structured-text reader shared by material files and run configs:
//
//   # comment
//   key = value
//   [section]
//   key = value
//
// Keys before the first header belong to an unnamed root section. Section
// names may repeat (e.g. several [oscillator] blocks); keys may not repeat
// within one section.

#include <filesystem>
#include <initializer_list>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casimir {

class KeyValueSection {
public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };

    KeyValueSection(std::string name, std::string source, int line)
        : name_(std::move(name)), source_(std::move(source)), line_(line) {}

    const std::string& name() const noexcept { return name_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool has(std::string_view key) const;

    std::optional<std::string> find(std::string_view key) const;
    std::string get_string(std::string_view key) const;
    double get_double(std::string_view key) const;
    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;
    /// Comma-separated list of numbers; an empty value gives an empty list.
    std::vector<double> get_double_list(std::string_view key) const;

    /// Throws ConfigError naming the first key not in `allowed`.
    void reject_unknown(std::initializer_list<std::string_view> allowed) const;

    void add(std::string key, std::string value, int line);

private:
    const Entry& entry(std::string_view key) const;
    [[noreturn]] void fail(const std::string& msg, int line) const;

    std::string name_;
    std::string source_;
    int line_;
    std::vector<Entry> entries_;
};

class KeyValueDocument {
public:
    static KeyValueDocument parse(std::istream& in, const std::string& source_name = "<input>");
    static KeyValueDocument load(const std::filesystem::path& path);

    const KeyValueSection& root() const { return sections_.front(); }
    /// All sections with the given name, in file order.
    std::vector<const KeyValueSection*> sections(std::string_view name) const;
    /// The unique section with the given name, or nullptr. Throws if repeated.
    const KeyValueSection* section(std::string_view name) const;
    const KeyValueSection& require_section(std::string_view name) const;
    void reject_unknown_sections(std::initializer_list<std::string_view> allowed) const;

    const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::vector<KeyValueSection> sections_;
};

}  // namespace casimir
