// SPDX-License-Identifier: Apache-2.0
#include "assertforge/assertion.hpp"

#include "assertforge/diag.hpp"

#include <json.hpp>

namespace assertforge {

std::string assertions_to_json(const std::vector<AssertionRecord>& recs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : recs) {
        nlohmann::ordered_json row;
        row["signal"] = r.signal;
        row["signal_type"] = r.signal_type;
        row["category"] = r.category;
        row["source"] = r.source;
        row["text"] = r.text;
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

std::vector<AssertionRecord> assertions_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("assertions.json: invalid JSON: ") + e.what());
    }
    if (!j.is_array()) throw Error("assertions.json: expected a top-level array");
    std::vector<AssertionRecord> out;
    for (const auto& row : j) {
        if (!row.is_object() || !row.contains("text") || !row["text"].is_string())
            throw Error("assertions.json: each entry needs a \"text\" string");
        AssertionRecord r;
        r.text = row["text"].get<std::string>();
        auto str_or = [&](const char* key) {
            return row.contains(key) && row[key].is_string() ? row[key].get<std::string>()
                                                             : std::string();
        };
        r.signal = str_or("signal");
        r.signal_type = str_or("signal_type");
        r.category = str_or("category");
        r.source = str_or("source");
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace assertforge
