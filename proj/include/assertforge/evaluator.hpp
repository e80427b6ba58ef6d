// SPDX-License-Identifier: Apache-2.0
//
// Assertion evaluation: syntax/bind checking, bounded trace adjudication
// over the golden RTL (a refutation-sound stand-in for unbounded model
// checking), COI coverage of passing assertions, and aggregation into the
// grid-shaped report (rows: IO clock/reset/control/data, Reg control/data,
// From-waveform; columns: width/connectivity/function/total).
#pragma once

#include "assertforge/assertion.hpp"
#include "assertforge/rtl.hpp"
#include "assertforge/sva.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace assertforge::eval {

enum class Outcome { SyntaxErr, BindErr, Fail, Pass, VacuousPass, Undetermined };
const char* to_string(Outcome o);

// ---- per-trace semantics ----

struct TraceVerdict {
    Outcome outcome = Outcome::VacuousPass;
    int fail_cycle = -1;  // earliest failing attempt start, when outcome == Fail
};

// Finite-trace check. For each attempt start t: a matched antecedent
// obligates the consequent within its window; windows running past the
// trace end make the attempt undetermined (never fail); disable-iff true
// during an attempt aborts it as vacuous; X-valued positions make the
// attempt undetermined unless some path matches definitely. Per trace:
// fail(earliest t) > undetermined > pass > vacuous_pass.
TraceVerdict eval_on_trace(const sva::PropertyAst& prop, const rtl::Trace& trace);

// ---- adjudication ----

struct Budget {
    int n_traces = 64;
    int n_cycles = 32;
    uint64_t seed = 42;
};

struct Verdict {
    Outcome outcome = Outcome::VacuousPass;
    std::string detail;        // parse/bind diagnostic when outcome is an error
    int fail_cycle = -1;
    long long checked_cycles = 0;
    std::string stimulus_name;                     // label of the refuting stimulus
    std::optional<rtl::Stimulus> counterexample;   // replayable on a fail
};

// Deterministic stimulus battery: reset pulse, all-zeros, all-ones, each
// non-clock input toggled alone (resets held inactive), then seeded random
// stimuli up to the trace budget. Clock inputs are driven constant 0: each
// simulated cycle is one sampling tick, so the clock lane carries no
// information. Labels are stable ("reset-pulse", "all-zeros", "all-ones",
// "toggle:<input>", "random:<k>").
std::vector<std::pair<std::string, rtl::Stimulus>> make_battery(const rtl::RtlDesign& design,
                                                                const Budget& budget);

// Simulates the battery and aggregates per-trace verdicts: first fail
// short-circuits (earliest cycle on that stimulus); otherwise any
// non-vacuous pass beats undetermined beats vacuous.
Verdict adjudicate(const sva::PropertyAst& prop, const rtl::RtlDesign& design,
                   const Budget& budget);

// ---- syntax / bind checking ----

struct CheckedAssertion {
    AssertionRecord rec;
    std::optional<sva::PropertyAst> ast;  // engaged iff parsed and bound
    bool bind_failed = false;             // parse ok, bind violations found
    std::string detail;                   // first diagnostic when not engaged
};

std::vector<CheckedAssertion> check_syntax(const std::vector<AssertionRecord>& recs,
                                           const std::vector<SignalDefinition>& signals);

// ---- aggregation ----

struct Triple {
    int gen = 0, syn = 0, pass = 0;  // pass is paper-comparable: pass + vacuous
};

struct RowStats {
    std::string label;
    int signal_count = 0;  // distinct target signals seen in this row
    Triple width, conn, func, total;
    int vacuous = 0, undetermined = 0, failed = 0;
    bool coi_defined = false;
    double coi = 0.0;
};

struct CoiSummary {
    bool present = false;
    double overall = 0.0;
    std::map<std::string, double> by_row;  // keyed by row label
};

struct EvalReport {
    std::string design;
    Budget budget;
    std::vector<RowStats> rows;  // IO clock/reset/control/data, Reg control/data, waveform
    RowStats total;              // "Design Total"
    CoiSummary coi;
    std::vector<std::string> notes;  // deviation notes, always present
};

// Row placement: source io_port -> IO rows by signal_type, arch_register ->
// Reg control/data, waveform -> the From-waveform row. Percentages are
// never stored; renderers recompute them from the counts.
EvalReport aggregate(const std::string& design_name,
                     const std::vector<CheckedAssertion>& checked,
                     const std::vector<Verdict>& verdicts, const CoiSummary& coi,
                     const Budget& budget);

// COI over pass-status assertions (pass + vacuous pass), per row and overall.
CoiSummary compute_coi(const rtl::RtlDesign& design,
                       const std::vector<CheckedAssertion>& checked,
                       const std::vector<Verdict>& verdicts);

// One-call evaluation: check, adjudicate (battery simulated once and shared
// across assertions), COI, aggregate.
struct EvalRun {
    std::vector<CheckedAssertion> checked;
    std::vector<Verdict> verdicts;
    EvalReport report;
};
EvalRun evaluate_assertions(const std::string& design_name, const rtl::RtlDesign& design,
                            const std::vector<AssertionRecord>& recs, const Budget& budget);

// ---- rendering ----

int pct_round(double pct);                    // half away from zero
std::string format_triple(const Triple& t);   // "65/65/56"
std::string format_pct_pair(const Triple& t); // "100%/86%" (syntax%, pass% of generated)

std::string render_report_md(const EvalReport& r);
std::string render_report_json(const EvalReport& r);

// Multi-design summary in the shape of the cross-design table, with an
// Average line (mean of the unrounded per-design percentages/coverages).
struct DesignLine {
    std::string name;
    Triple total;
    double coverage = 0.0;  // in [0,1]
};
std::string render_summary_md(const std::vector<DesignLine>& lines);

} // namespace assertforge::eval
