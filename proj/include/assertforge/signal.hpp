// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace assertforge {

enum class SignalKind { Input, Output, Inout, Reg, Wire };
enum class Hierarchy { IoPort, ArchRegister, Internal };

// One row of signals.json: the designer-supplied ground truth the rest of
// the pipeline validates against.
struct SignalDefinition {
    std::string name;
    int width = 1;
    SignalKind kind = SignalKind::Wire;
    Hierarchy hierarchy = Hierarchy::Internal;
};

const char* to_string(SignalKind k);
const char* to_string(Hierarchy h);
std::optional<SignalKind> signal_kind_from(const std::string& s);
std::optional<Hierarchy> hierarchy_from(const std::string& s);

const SignalDefinition* find_signal(const std::vector<SignalDefinition>& defs,
                                    const std::string& name);

} // namespace assertforge
