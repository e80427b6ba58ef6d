// SPDX-License-Identifier: Apache-2.0
//
// The assertion record: one generated SVA plus the metadata the report
// needs to place it (target signal, check category, provenance row).
// Serialized as assertions.json, the interchange format between the
// generate and evaluate stages.
#pragma once

#include <string>
#include <vector>

namespace assertforge {

struct AssertionRecord {
    std::string signal;       // target signal name ("" for waveform-derived)
    std::string signal_type;  // clock | reset | control | data | ""
    std::string category;     // width | connectivity | function
    std::string source;       // io_port | arch_register | waveform
    std::string text;         // the assertion itself
};

std::string assertions_to_json(const std::vector<AssertionRecord>& recs);
std::vector<AssertionRecord> assertions_from_json(const std::string& text);

} // namespace assertforge
