// SPDX-License-Identifier: Apache-2.0
//
// Verilog-subset frontend and execution core: parse a single flat module,
// build the signal dependency graph, compute cone-of-influence coverage,
// and simulate cycle-accurate traces.
//
// Subset: module/endmodule, ANSI or classic port lists, wire/reg decls
// with [N-1:0] ranges, continuous assigns, always blocks (@(posedge clk
// [or posedge rst]) and @(*)), begin/end, if/else, case, blocking and
// nonblocking assignments, the operator set shared with the assertion
// frontend. Instantiation, generate, initial, parameters, tasks and
// functions are UnsupportedConstruct.
#pragma once

#include "assertforge/diag.hpp"
#include "assertforge/expr.hpp"
#include "assertforge/signal.hpp"
#include "assertforge/sva.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace assertforge::rtl {

class MultipleDrivers : public Error {
public:
    explicit MultipleDrivers(std::string sig)
        : Error("multiple drivers for signal " + sig), signal(std::move(sig)) {}
    std::string signal;
};

class MixedAssignDiscipline : public Error {
public:
    MixedAssignDiscipline(SourcePos p, const std::string& detail)
        : Error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + detail),
          pos(p) {}
    SourcePos pos;
};

class UnsupportedConstruct : public Error {
public:
    UnsupportedConstruct(SourcePos p, std::string what)
        : Error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": unsupported construct: " + what),
          pos(p), construct(std::move(what)) {}
    SourcePos pos;
    std::string construct;
};

class CombinationalCycle : public Error {
public:
    explicit CombinationalCycle(std::vector<std::string> sigs)
        : Error(describe(sigs)), signals(std::move(sigs)) {}
    std::vector<std::string> signals;

private:
    static std::string describe(const std::vector<std::string>& sigs) {
        std::string s = "combinational cycle through:";
        for (const auto& n : sigs) s += " " + n;
        return s;
    }
};

class StimulusShapeMismatch : public Error {
public:
    explicit StimulusShapeMismatch(const std::string& what)
        : Error("stimulus shape mismatch: " + what) {}
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct CaseItem {
    std::vector<ExprPtr> labels;  // empty for default
    bool is_default = false;
    StmtPtr body;
};

struct Stmt {
    enum class Kind { Block, If, Case, Assign };
    Kind kind;
    // Block
    std::vector<StmtPtr> stmts;
    // If
    ExprPtr cond;
    StmtPtr then_s, else_s;  // else_s may be null
    // Case
    ExprPtr sel;
    std::vector<CaseItem> items;
    // Assign
    std::string lhs;
    ExprPtr rhs;
    bool nonblocking = false;
    SourcePos pos{};
};

struct Trigger {
    bool combinational = false;
    sva::Edge clock_edge = sva::Edge::Pos;
    std::string clock;
    bool has_reset = false;
    sva::Edge reset_edge = sva::Edge::Pos;
    std::string reset;
};

struct Process {
    Trigger trigger;
    StmtPtr body;
    std::set<std::string> assigned;
    SourcePos pos{};
};

struct ContinuousAssign {
    std::string lhs;
    ExprPtr rhs;
    SourcePos pos{};
};

struct RtlDesign {
    std::string name;
    std::vector<SignalDefinition> signals;  // ports first, then internals, in source order
    std::set<std::string> regs;             // storage class (includes output regs)
    std::vector<Process> processes;
    std::vector<ContinuousAssign> continuous_assigns;

    const SignalDefinition* find(const std::string& n) const { return find_signal(signals, n); }
    int width_of(const std::string& n) const;
    std::vector<std::string> input_names() const;
};

RtlDesign parse_verilog(const std::string& text);

// ---- dependency graph / cone of influence ----

struct DepGraph {
    std::vector<std::string> nodes;      // design signal order
    std::map<std::string, int> index;
    std::vector<std::set<int>> in_of;    // in_of[v] = {u : edge u -> v}
};

DepGraph build_depgraph(const RtlDesign& design);

// Reflexive transitive fan-in of the seed set.
std::set<std::string> fanin_closure(const DepGraph& g, const std::set<std::string>& seeds);

// Signals excluded from the coverage denominator: clocks are process
// trigger clocks, property clocking signals, and Clock-classified names;
// resets are async trigger resets and Reset-classified names.
struct CoiResult {
    double coverage = 0.0;
    std::set<std::string> covered;
    std::set<std::string> denominator;
    std::set<std::string> excluded;
};

CoiResult coi_coverage(const DepGraph& g, const RtlDesign& design,
                       const std::vector<sva::PropertyAst>& props);

// Name-based net classification used for coverage exclusions and for
// driving generated stimulus (token match on '_'-separated name parts).
bool is_clock_name(const std::string& name);
bool is_reset_name(const std::string& name);

// ---- simulation ----

struct Stimulus {
    int cycles = 0;
    std::map<std::string, std::vector<Value>> inputs;
};

// Parses {"cycles": int, "inputs": {"name": [int|"x", ...]}}.
Stimulus parse_stimulus(const std::string& json_text);
std::string stimulus_to_json(const Stimulus& s);

struct Trace {
    int length = 0;
    std::map<std::string, std::vector<Value>> values;  // settled per-cycle values

    const Value& at(const std::string& sig, int cycle) const;
    bool has(const std::string& sig) const { return values.count(sig) != 0; }
};

// Two-phase per-cycle semantics: (1) settle combinational logic in
// topological order, (2) commit all nonblocking updates simultaneously.
// Each trace cycle is one sampling tick; registers start at X.
Trace simulate(const RtlDesign& design, const Stimulus& stimulus, int n_cycles);

// Structural width of an expression under the design's declarations.
int expr_width(const Expr& e, const RtlDesign& design);

} // namespace assertforge::rtl
