#include "idt/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace idt {

namespace {

std::mutex sink_mutex;

WarningSink& current_sink() {
    static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

} // namespace

WarningSink set_warning_sink(WarningSink sink) {
    std::lock_guard lock(sink_mutex);
    return std::exchange(current_sink(), std::move(sink));
}

void log_warning(std::string_view message) {
    std::lock_guard lock(sink_mutex);
    if (current_sink()) {
        current_sink()(message);
    }
}

} // namespace idt
