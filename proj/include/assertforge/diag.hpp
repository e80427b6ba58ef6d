// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace assertforge {

// Base for hard errors raised by the pipeline. Syntax diagnostics for
// generated assertions are data (they become verdicts), not exceptions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad flags, bad config file, impossible mode combinations. Exit code 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct SourcePos {
    int line = 1;
    int col = 1;
};

struct Diagnostic {
    SourcePos pos;
    std::string message;
    std::vector<std::string> expected; // expected-token set, may be empty
    bool subset_unsupported = false;   // recognized construct outside the supported subset

    std::string str() const;
};

// Grammar violation. Carries a structured diagnostic with position.
class SyntaxError : public Error {
public:
    explicit SyntaxError(Diagnostic d) : Error(d.str()), diag(std::move(d)) {}
    Diagnostic diag;
};

// Recognized full-language construct outside the supported subset
// (e.g. "throughout", nested implication, module instantiation).
// Distinct from SyntaxError so reports can separate invalid from unsupported.
class SubsetUnsupported : public SyntaxError {
public:
    explicit SubsetUnsupported(Diagnostic d) : SyntaxError(mark(std::move(d))) {}

private:
    static Diagnostic mark(Diagnostic d) {
        d.subset_unsupported = true;
        return d;
    }
};

} // namespace assertforge
