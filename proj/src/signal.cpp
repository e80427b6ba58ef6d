// SPDX-License-Identifier: Apache-2.0
#include "assertforge/signal.hpp"

namespace assertforge {

const char* to_string(SignalKind k) {
    switch (k) {
        case SignalKind::Input: return "input";
        case SignalKind::Output: return "output";
        case SignalKind::Inout: return "inout";
        case SignalKind::Reg: return "reg";
        case SignalKind::Wire: return "wire";
    }
    return "?";
}

const char* to_string(Hierarchy h) {
    switch (h) {
        case Hierarchy::IoPort: return "io_port";
        case Hierarchy::ArchRegister: return "arch_register";
        case Hierarchy::Internal: return "internal";
    }
    return "?";
}

std::optional<SignalKind> signal_kind_from(const std::string& s) {
    if (s == "input") return SignalKind::Input;
    if (s == "output") return SignalKind::Output;
    if (s == "inout") return SignalKind::Inout;
    if (s == "reg") return SignalKind::Reg;
    if (s == "wire") return SignalKind::Wire;
    return std::nullopt;
}

std::optional<Hierarchy> hierarchy_from(const std::string& s) {
    if (s == "io_port") return Hierarchy::IoPort;
    if (s == "arch_register") return Hierarchy::ArchRegister;
    if (s == "internal") return Hierarchy::Internal;
    return std::nullopt;
}

const SignalDefinition* find_signal(const std::vector<SignalDefinition>& defs,
                                    const std::string& name) {
    for (const auto& s : defs)
        if (s.name == name) return &s;
    return nullptr;
}

} // namespace assertforge
