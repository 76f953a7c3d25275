#pragma once

#include <functional>
#include <string_view>

namespace idt {

using WarningSink = std::function<void(std::string_view)>;

/// Routes library warnings. The default sink writes "warning: ..." to stderr.
/// Passing an empty function silences warnings. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void log_warning(std::string_view message);

} // namespace idt
