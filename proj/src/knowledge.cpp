// SPDX-License-Identifier: Apache-2.0

#include "assertforge/knowledge.hpp"

#include "assertforge/fsio.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace assertforge::knowledge {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (size_t i = 0; i < text.size(); ++i) {
        const unsigned char ch = (unsigned char)text[i];
        if (std::isalnum(ch)) {
            cur.push_back((char)std::tolower(ch));
        } else if (ch == '$' && cur.empty() && i + 1 < text.size() &&
                   std::isalnum((unsigned char)text[i + 1])) {
            cur.push_back('$');
        } else {
            if (!cur.empty() && cur != "$") out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty() && cur != "$") out.push_back(cur);
    return out;
}

namespace {

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Paragraph spans: each span ends after the blank-line run that follows it,
// so the spans concatenate back to the input.
std::vector<std::string> paragraph_spans(const std::string& text) {
    std::vector<std::string> spans;
    size_t start = 0, pos = 0;
    bool in_blank_tail = false;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        const size_t line_end = eol == std::string::npos ? text.size() : eol + 1;
        const bool blank = is_blank(std::string_view(text).substr(pos, line_end - pos));
        if (blank) {
            in_blank_tail = true;
        } else if (in_blank_tail) {
            spans.push_back(text.substr(start, pos - start));
            start = pos;
            in_blank_tail = false;
        }
        pos = line_end;
    }
    if (start < text.size()) spans.push_back(text.substr(start));
    return spans;
}

// Hard-split an oversized span: break at the last whitespace within the
// joining window below the budget, or at the budget edge if none.
void split_oversized(const std::string& span, std::vector<std::string>& out) {
    size_t pos = 0;
    while (span.size() - pos > (size_t)kMaxChunkChars) {
        size_t cut = pos + (size_t)kMaxChunkChars;
        size_t best = std::string::npos;
        for (size_t i = cut; i > pos && i + (size_t)kJoinWindow > cut; --i) {
            const unsigned char ch = (unsigned char)span[i - 1];
            if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
                best = i;
                break;
            }
        }
        if (best != std::string::npos && best > pos) cut = best;
        out.push_back(span.substr(pos, cut - pos));
        pos = cut;
    }
    out.push_back(span.substr(pos));
}

} // namespace

std::vector<std::string> chunk_text(const std::string& text) {
    std::vector<std::string> pieces;
    for (const auto& span : paragraph_spans(text)) {
        if (span.size() > (size_t)kMaxChunkChars) split_oversized(span, pieces);
        else pieces.push_back(span);
    }
    // Greedy merge of adjacent pieces under the budget.
    std::vector<std::string> out;
    for (auto& p : pieces) {
        if (!out.empty() && out.back().size() + p.size() <= (size_t)kMaxChunkChars)
            out.back() += p;
        else
            out.push_back(std::move(p));
    }
    return out;
}

namespace {

void finalize_stats(LexicalIndex& idx) {
    idx.doc_freq.clear();
    long total = 0;
    for (auto& ch : idx.chunks) {
        ch.term_counts.clear();
        ch.length = 0;
        for (const auto& tok : tokenize(ch.text)) {
            ch.term_counts[tok] += 1;
            ch.length += 1;
        }
        total += ch.length;
        for (const auto& [tok, n] : ch.term_counts) {
            (void)n;
            idx.doc_freq[tok] += 1;
        }
    }
    idx.avg_len = idx.chunks.empty() ? 0.0 : (double)total / (double)idx.chunks.size();
}

bool all_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

} // namespace

LexicalIndex build_index_from(const std::vector<std::pair<std::string, std::string>>& files) {
    LexicalIndex idx;
    for (const auto& [source, content] : files) {
        for (auto& piece : chunk_text(content)) {
            if (all_blank(piece)) continue;  // e.g. a file of only blank lines
            KnowledgeChunk ch;
            ch.id = (int)idx.chunks.size();
            ch.source = source;
            ch.text = std::move(piece);
            idx.chunks.push_back(std::move(ch));
        }
    }
    finalize_stats(idx);
    return idx;
}

LexicalIndex build_index(const std::string& corpus_dir) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& p : fsio::list_files(corpus_dir, {".md", ".txt"}))
        files.emplace_back(p.string(), fsio::read_file(p));
    LexicalIndex idx = build_index_from(files);
    if (idx.chunks.empty()) throw EmptyCorpus(corpus_dir);
    return idx;
}

std::vector<Scored> retrieve(const LexicalIndex& index, const std::string& query, int k) {
    std::vector<Scored> scored;
    if (k <= 0 || index.chunks.empty()) return scored;
    const auto qtoks = tokenize(query);
    if (qtoks.empty()) return scored;
    const int n = (int)index.chunks.size();
    for (const auto& ch : index.chunks) {
        double s = 0.0;
        for (const auto& t : qtoks) {
            auto it = ch.term_counts.find(t);
            if (it == ch.term_counts.end()) continue;
            auto df_it = index.doc_freq.find(t);
            const int df = df_it == index.doc_freq.end() ? 0 : df_it->second;
            const double idf = std::log(1.0 + ((double)n - df + 0.5) / (df + 0.5));
            const double tf = (double)it->second;
            const double norm =
                kBm25K1 * (1.0 - kBm25B + kBm25B * (double)ch.length / index.avg_len);
            s += idf * tf * (kBm25K1 + 1.0) / (tf + norm);
        }
        if (s > 0.0) scored.push_back({ch.id, s});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    });
    if ((int)scored.size() > k) scored.resize((size_t)k);
    return scored;
}

std::string index_to_json(const LexicalIndex& index) {
    nlohmann::ordered_json j;
    j["chunks"] = nlohmann::ordered_json::array();
    for (const auto& ch : index.chunks) {
        nlohmann::ordered_json row;
        row["id"] = ch.id;
        row["source"] = ch.source;
        row["text"] = ch.text;
        j["chunks"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

LexicalIndex index_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed index json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("chunks") || !j["chunks"].is_array())
        throw Error("malformed index json: missing chunks array");
    LexicalIndex idx;
    for (const auto& row : j["chunks"]) {
        if (!row.is_object() || !row.contains("text") || !row["text"].is_string())
            throw Error("malformed index json: chunk without text");
        KnowledgeChunk ch;
        ch.id = (int)idx.chunks.size();
        ch.source = row.value("source", std::string{});
        ch.text = row["text"].get<std::string>();
        idx.chunks.push_back(std::move(ch));
    }
    finalize_stats(idx);
    return idx;
}

} // namespace assertforge::knowledge
