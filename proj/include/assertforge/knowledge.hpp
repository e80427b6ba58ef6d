// SPDX-License-Identifier: Apache-2.0
//
// Lexical retrieval over a local corpus of SVA reference prose: paragraph
// chunking, BM25 scoring, optional JSON persistence. Deterministic by
// construction — files are visited in sorted order and ties break on
// ascending chunk id.
#pragma once

#include "assertforge/diag.hpp"

#include <map>
#include <string>
#include <vector>

namespace assertforge::knowledge {

class EmptyCorpus : public Error {
public:
    explicit EmptyCorpus(const std::string& dir)
        : Error("no retrievable corpus content under " + dir) {}
};

constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;
constexpr int kMaxChunkChars = 1200;
constexpr int kJoinWindow = 100;  // lookback for a whitespace break on hard splits
constexpr int kDefaultTopK = 4;

struct KnowledgeChunk {
    int id = 0;
    std::string source;  // originating file path
    std::string text;    // verbatim passage, <= kMaxChunkChars chars
    std::map<std::string, int> term_counts;
    int length = 0;  // total token count
};

struct LexicalIndex {
    std::vector<KnowledgeChunk> chunks;       // chunk id == position
    std::map<std::string, int> doc_freq;      // token -> #chunks containing it
    double avg_len = 0.0;
};

// Lowercase tokens split on non-alphanumerics; a '$' immediately followed by
// an alphanumeric is kept as part of the token so SVA system-function names
// ($past, $stable, ...) survive intact.
std::vector<std::string> tokenize(const std::string& text);

// Splits at blank-line paragraph boundaries and greedily merges consecutive
// paragraphs up to the chunk budget; an oversized paragraph is hard-split at
// the last whitespace within the joining window (or at the budget edge).
// The returned pieces concatenate to exactly the input.
std::vector<std::string> chunk_text(const std::string& text);

// Builds from (source name, content) pairs; chunk ids follow input order.
LexicalIndex build_index_from(const std::vector<std::pair<std::string, std::string>>& files);

// Reads .md/.txt files under corpus_dir in sorted path order.
// Throws EmptyCorpus when no chunk results.
LexicalIndex build_index(const std::string& corpus_dir);

struct Scored {
    int chunk_id = 0;
    double score = 0.0;
};

// BM25 (each query-token occurrence contributes); zero-score chunks are
// dropped, order is descending score then ascending chunk id, at most k.
std::vector<Scored> retrieve(const LexicalIndex& index, const std::string& query, int k);

// Persistence: chunk list only; statistics are recomputed on load so the
// two can never disagree.
std::string index_to_json(const LexicalIndex& index);
LexicalIndex index_from_json(const std::string& json_text);

} // namespace assertforge::knowledge
