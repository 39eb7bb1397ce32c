#include "qweak/diagnostics.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace qweak {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

DiagnosticSink& sink() {
    static DiagnosticSink s;
    return s;
}

}  // namespace

void set_diagnostic_sink(DiagnosticSink s) {
    std::lock_guard lock(sink_mutex());
    sink() = std::move(s);
}

void emit_diagnostic(std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (sink()) {
        sink()(message);
        return;
    }
    static const bool verbose = std::getenv("QWEAK_VERBOSE") != nullptr;
    if (verbose) std::clog << "[qweak] " << message << '\n';
}

}  // namespace qweak
