// SPDX-License-Identifier: Apache-2.0
#include "assertforge/diag.hpp"

#include <sstream>

namespace assertforge {

std::string Diagnostic::str() const {
    std::ostringstream ss;
    ss << pos.line << ":" << pos.col << ": " << message;
    if (!expected.empty()) {
        ss << " (expected ";
        for (size_t i = 0; i < expected.size(); i++) {
            if (i) ss << (i + 1 == expected.size() ? " or " : ", ");
            ss << expected[i];
        }
        ss << ")";
    }
    return ss.str();
}

} // namespace assertforge
