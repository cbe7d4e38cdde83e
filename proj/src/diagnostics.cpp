#include "casimir/diagnostics.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace casimir {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& sink() {
    static WarningHandler h = [](const std::string& msg) { std::clog << "warning: " << msg << '\n'; };
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(sink_mutex());
    return std::exchange(sink(), std::move(handler));
}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex());
    if (sink()) sink()(message);
}

}  // namespace casimir
