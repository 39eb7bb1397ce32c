#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace qweak {

using DiagnosticSink = std::function<void(std::string_view)>;

// Installs a process-wide sink for numerical diagnostics (clamps, oracle
// disagreements). Passing an empty function restores the default, which
// discards messages unless QWEAK_VERBOSE is set in the environment.
void set_diagnostic_sink(DiagnosticSink sink);

void emit_diagnostic(std::string_view message);

}  // namespace qweak
