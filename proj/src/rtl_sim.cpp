// SPDX-License-Identifier: Apache-2.0
#include "assertforge/rtl.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <functional>

namespace assertforge::rtl {
namespace {

// External read set of a combinational unit: signals read before any
// write inside the unit. Branch-local writes only count as internal when
// every path performs them.
void reads_before_write(const StmtPtr& s, std::set<std::string>& written,
                        std::set<std::string>& reads) {
    if (!s) return;
    auto note_expr = [&](const ExprPtr& e) {
        if (!e) return;
        std::set<std::string> refs;
        collect_refs(*e, refs);
        for (const auto& r : refs)
            if (!written.count(r)) reads.insert(r);
    };
    switch (s->kind) {
    case Stmt::Kind::Block:
        for (const auto& sub : s->stmts) reads_before_write(sub, written, reads);
        break;
    case Stmt::Kind::If: {
        note_expr(s->cond);
        std::set<std::string> wt = written, we = written;
        reads_before_write(s->then_s, wt, reads);
        reads_before_write(s->else_s, we, reads);
        std::set<std::string> both;
        std::set_intersection(wt.begin(), wt.end(), we.begin(), we.end(),
                              std::inserter(both, both.begin()));
        written = std::move(both);
        break;
    }
    case Stmt::Kind::Case: {
        note_expr(s->sel);
        bool has_default = false;
        std::vector<std::set<std::string>> branch_writes;
        for (const auto& item : s->items) {
            if (item.is_default) has_default = true;
            std::set<std::string> wb = written;
            reads_before_write(item.body, wb, reads);
            branch_writes.push_back(std::move(wb));
        }
        if (has_default && !branch_writes.empty()) {
            std::set<std::string> both = branch_writes[0];
            for (size_t i = 1; i < branch_writes.size(); ++i) {
                std::set<std::string> next;
                std::set_intersection(both.begin(), both.end(),
                                      branch_writes[i].begin(), branch_writes[i].end(),
                                      std::inserter(next, next.begin()));
                both = std::move(next);
            }
            written = std::move(both);
        }
        break;
    }
    case Stmt::Kind::Assign:
        note_expr(s->rhs);
        written.insert(s->lhs);
        break;
    }
}

struct CombUnit {
    const ContinuousAssign* assign = nullptr;  // exactly one of assign/process set
    const Process* process = nullptr;
    std::set<std::string> writes;
    std::set<std::string> reads;  // external reads only
};

struct Engine {
    const RtlDesign& design;
    std::map<std::string, Value> state;
    std::vector<CombUnit> units;
    std::vector<int> topo;  // unit evaluation order

    explicit Engine(const RtlDesign& d) : design(d) {
        for (const auto& sig : d.signals)
            state[sig.name] = Value::all_x(sig.width);
        build_units();
        schedule();
    }

    void build_units() {
        for (const auto& ca : design.continuous_assigns) {
            CombUnit u;
            u.assign = &ca;
            u.writes.insert(ca.lhs);
            collect_refs(*ca.rhs, u.reads);
            units.push_back(std::move(u));
        }
        for (const auto& proc : design.processes) {
            if (!proc.trigger.combinational) continue;
            CombUnit u;
            u.process = &proc;
            u.writes = proc.assigned;
            std::set<std::string> written;
            reads_before_write(proc.body, written, u.reads);
            units.push_back(std::move(u));
        }
    }

    void schedule() {
        const size_t n = units.size();
        std::map<std::string, std::vector<int>> writer_of;
        for (size_t i = 0; i < n; ++i)
            for (const auto& w : units[i].writes)
                writer_of[w].push_back(static_cast<int>(i));
        std::vector<std::set<int>> out(n);
        std::vector<int> indeg(n, 0);
        for (size_t i = 0; i < n; ++i)
            for (const auto& r : units[i].reads) {
                auto it = writer_of.find(r);
                if (it == writer_of.end()) continue;
                for (int w : it->second)
                    if (out[w].insert(static_cast<int>(i)).second) indeg[i]++;
            }
        std::deque<int> ready;
        for (size_t i = 0; i < n; ++i)
            if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
        while (!ready.empty()) {
            int u = ready.front();
            ready.pop_front();
            topo.push_back(u);
            for (int v : out[u])
                if (--indeg[v] == 0) ready.push_back(v);
        }
        if (topo.size() != n) {
            std::set<std::string> in_cycle;
            for (size_t i = 0; i < n; ++i)
                if (indeg[i] > 0)
                    in_cycle.insert(units[i].writes.begin(), units[i].writes.end());
            throw CombinationalCycle(
                std::vector<std::string>(in_cycle.begin(), in_cycle.end()));
        }
    }

    Value eval(const Expr& e) const {
        EvalCtx ctx;
        ctx.ref = [this](const std::string& name) { return state.at(name); };
        return eval_expr(e, ctx);
    }

    void store(std::map<std::string, Value>& into, const std::string& lhs, Value v) {
        into[lhs] = v_resize(v, design.width_of(lhs));
    }

    // Executes a statement tree; `sink` receives assignments (state itself
    // for blocking, the pending NBA map for clocked processes).
    void exec(const StmtPtr& s, std::map<std::string, Value>& sink) {
        if (!s) return;
        switch (s->kind) {
        case Stmt::Kind::Block:
            for (const auto& sub : s->stmts) exec(sub, sink);
            break;
        case Stmt::Kind::If:
            // X/Z condition takes the else branch, as in simulation.
            if (truth(eval(*s->cond)) == Tri::True)
                exec(s->then_s, sink);
            else
                exec(s->else_s, sink);
            break;
        case Stmt::Kind::Case: {
            Value sel = eval(*s->sel);
            const CaseItem* hit = nullptr;
            const CaseItem* dflt = nullptr;
            for (const auto& item : s->items) {
                if (item.is_default) {
                    dflt = &item;
                    continue;
                }
                for (const auto& label : item.labels) {
                    Value lv = eval(*label);
                    int w = std::max(sel.width, lv.width);
                    if (v_resize(sel, w).identical(v_resize(lv, w))) {  // case equality
                        hit = &item;
                        break;
                    }
                }
                if (hit) break;
            }
            if (!hit) hit = dflt;
            if (hit) exec(hit->body, sink);
            break;
        }
        case Stmt::Kind::Assign:
            store(sink, s->lhs, eval(*s->rhs));
            break;
        }
    }

    void settle() {
        for (int i : topo) {
            const CombUnit& u = units[i];
            if (u.assign)
                store(state, u.assign->lhs, eval(*u.assign->rhs));
            else
                exec(u.process->body, state);
        }
    }

    void tick() {
        std::map<std::string, Value> pending;
        for (const auto& proc : design.processes) {
            if (proc.trigger.combinational) continue;
            exec(proc.body, pending);
        }
        for (auto& [name, v] : pending) state[name] = v;
    }
};

} // namespace

Stimulus parse_stimulus(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw StimulusShapeMismatch(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("cycles") || !j.contains("inputs"))
        throw StimulusShapeMismatch("expected {\"cycles\": int, \"inputs\": {...}}");
    if (!j["cycles"].is_number_integer() || j["cycles"].get<int64_t>() < 1)
        throw StimulusShapeMismatch("cycles must be a positive integer");
    Stimulus s;
    s.cycles = j["cycles"].get<int>();
    if (!j["inputs"].is_object())
        throw StimulusShapeMismatch("inputs must be an object");
    for (const auto& [name, arr] : j["inputs"].items()) {
        if (!arr.is_array())
            throw StimulusShapeMismatch("input " + name + " must be an array");
        std::vector<Value> vals;
        for (const auto& cell : arr) {
            if (cell.is_string()) {
                std::string t = cell.get<std::string>();
                std::transform(t.begin(), t.end(), t.begin(), ::tolower);
                if (t != "x")
                    throw StimulusShapeMismatch("input " + name +
                                                " has a non-\"x\" string entry");
                vals.push_back(Value::all_x(64));
            } else if (cell.is_number_unsigned() || cell.is_number_integer()) {
                int64_t raw = cell.get<int64_t>();
                if (raw < 0)
                    throw StimulusShapeMismatch("input " + name +
                                                " has a negative entry");
                vals.push_back(Value::of(static_cast<uint64_t>(raw), 64));
            } else {
                throw StimulusShapeMismatch("input " + name +
                                            " entries must be ints or \"x\"");
            }
        }
        s.inputs[name] = std::move(vals);
    }
    return s;
}

std::string stimulus_to_json(const Stimulus& s) {
    nlohmann::ordered_json j;
    j["cycles"] = s.cycles;
    nlohmann::ordered_json in = nlohmann::ordered_json::object();
    for (const auto& [name, vals] : s.inputs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& v : vals) {
            if (v.known())
                arr.push_back(v.bits);
            else
                arr.push_back("x");
        }
        in[name] = std::move(arr);
    }
    j["inputs"] = std::move(in);
    return j.dump(2) + "\n";
}

const Value& Trace::at(const std::string& sig, int cycle) const {
    auto it = values.find(sig);
    if (it == values.end()) throw Error("trace has no signal " + sig);
    if (cycle < 0 || cycle >= length) throw Error("trace cycle out of range");
    return it->second[static_cast<size_t>(cycle)];
}

Trace simulate(const RtlDesign& design, const Stimulus& stimulus, int n_cycles) {
    if (n_cycles < 1) throw StimulusShapeMismatch("n_cycles must be >= 1");
    if (n_cycles > stimulus.cycles)
        throw StimulusShapeMismatch("stimulus covers " + std::to_string(stimulus.cycles) +
                                    " cycles, need " + std::to_string(n_cycles));
    std::vector<std::string> ins = design.input_names();
    for (const auto& name : ins) {
        auto it = stimulus.inputs.find(name);
        if (it == stimulus.inputs.end())
            throw StimulusShapeMismatch("missing input " + name);
        if (static_cast<int>(it->second.size()) < n_cycles)
            throw StimulusShapeMismatch("input " + name + " has " +
                                        std::to_string(it->second.size()) +
                                        " entries, need " + std::to_string(n_cycles));
    }
    for (const auto& [name, vals] : stimulus.inputs) {
        (void)vals;
        if (std::find(ins.begin(), ins.end(), name) == ins.end())
            throw StimulusShapeMismatch(name + " is not an input port");
    }

    Engine eng(design);
    Trace trace;
    trace.length = n_cycles;
    for (const auto& sig : design.signals)
        trace.values[sig.name].reserve(static_cast<size_t>(n_cycles));
    for (int t = 0; t < n_cycles; ++t) {
        for (const auto& name : ins)
            eng.store(eng.state, name, stimulus.inputs.at(name)[static_cast<size_t>(t)]);
        eng.settle();
        for (const auto& sig : design.signals)
            trace.values[sig.name].push_back(eng.state.at(sig.name));
        eng.tick();
    }
    return trace;
}

} // namespace assertforge::rtl
