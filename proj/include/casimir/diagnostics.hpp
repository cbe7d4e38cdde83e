#pragma once

#include <functional>
#include <string>

namespace casimir {

using WarningHandler = std::function<void(const std::string&)>;

/// Replaces the process-wide warning sink and returns the previous one.
/// The default sink prints to std::clog.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace casimir
