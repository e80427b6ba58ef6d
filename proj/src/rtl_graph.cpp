// SPDX-License-Identifier: Apache-2.0
#include "assertforge/rtl.hpp"

#include "assertforge/text.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace assertforge::rtl {

bool is_clock_name(const std::string& name) {
    for (const auto& tok : text::name_tokens(name))
        if (tok == "clk" || tok == "clock" || tok == "ck") return true;
    return false;
}

bool is_reset_name(const std::string& name) {
    for (const auto& tok : text::name_tokens(name))
        if (tok == "rst" || tok == "reset" || tok == "rstn" || tok == "resetn" ||
            tok == "arst" || tok == "nrst")
            return true;
    return false;
}

namespace {

void stmt_edges(const StmtPtr& s, std::vector<std::set<std::string>>& cond_stack,
                const std::function<void(const std::set<std::string>&, const std::string&)>& emit) {
    if (!s) return;
    switch (s->kind) {
    case Stmt::Kind::Block:
        for (const auto& sub : s->stmts) stmt_edges(sub, cond_stack, emit);
        break;
    case Stmt::Kind::If: {
        std::set<std::string> refs;
        collect_refs(*s->cond, refs);
        cond_stack.push_back(std::move(refs));
        stmt_edges(s->then_s, cond_stack, emit);
        stmt_edges(s->else_s, cond_stack, emit);
        cond_stack.pop_back();
        break;
    }
    case Stmt::Kind::Case: {
        std::set<std::string> refs;
        collect_refs(*s->sel, refs);
        cond_stack.push_back(std::move(refs));
        for (const auto& item : s->items) stmt_edges(item.body, cond_stack, emit);
        cond_stack.pop_back();
        break;
    }
    case Stmt::Kind::Assign: {
        std::set<std::string> srcs;
        collect_refs(*s->rhs, srcs);
        for (const auto& conds : cond_stack) srcs.insert(conds.begin(), conds.end());
        emit(srcs, s->lhs);
        break;
    }
    }
}

} // namespace

DepGraph build_depgraph(const RtlDesign& design) {
    DepGraph g;
    for (const auto& sig : design.signals) {
        g.index[sig.name] = static_cast<int>(g.nodes.size());
        g.nodes.push_back(sig.name);
    }
    g.in_of.resize(g.nodes.size());
    auto emit = [&](const std::set<std::string>& srcs, const std::string& lhs) {
        int v = g.index.at(lhs);
        for (const auto& s : srcs) g.in_of[v].insert(g.index.at(s));
    };
    for (const auto& ca : design.continuous_assigns) {
        std::set<std::string> srcs;
        collect_refs(*ca.rhs, srcs);
        emit(srcs, ca.lhs);
    }
    for (const auto& proc : design.processes) {
        // Sensitivity-list signals (clock, async reset edge) add no edges;
        // only data and enclosing-condition support does.
        std::vector<std::set<std::string>> cond_stack;
        stmt_edges(proc.body, cond_stack, emit);
    }
    return g;
}

std::set<std::string> fanin_closure(const DepGraph& g, const std::set<std::string>& seeds) {
    std::set<std::string> out;
    std::deque<int> work;
    std::vector<char> seen(g.nodes.size(), 0);
    for (const auto& s : seeds) {
        auto it = g.index.find(s);
        if (it == g.index.end()) continue;
        if (!seen[it->second]) {
            seen[it->second] = 1;
            work.push_back(it->second);
        }
    }
    while (!work.empty()) {
        int v = work.front();
        work.pop_front();
        out.insert(g.nodes[v]);
        for (int u : g.in_of[v])
            if (!seen[u]) {
                seen[u] = 1;
                work.push_back(u);
            }
    }
    return out;
}

CoiResult coi_coverage(const DepGraph& g, const RtlDesign& design,
                       const std::vector<sva::PropertyAst>& props) {
    CoiResult r;
    std::set<std::string> excluded;
    for (const auto& proc : design.processes) {
        if (proc.trigger.combinational) continue;
        excluded.insert(proc.trigger.clock);
        if (proc.trigger.has_reset) excluded.insert(proc.trigger.reset);
    }
    for (const auto& p : props) excluded.insert(p.clock);
    for (const auto& sig : design.signals)
        if (is_clock_name(sig.name) || is_reset_name(sig.name))
            excluded.insert(sig.name);
    for (const auto& sig : design.signals)
        if (!excluded.count(sig.name)) r.denominator.insert(sig.name);
    r.excluded = std::move(excluded);

    std::set<std::string> seeds;
    for (const auto& p : props) {
        auto refs = sva::referenced_signals(p);
        seeds.insert(refs.begin(), refs.end());
    }
    std::set<std::string> cone = fanin_closure(g, seeds);
    for (const auto& n : cone)
        if (r.denominator.count(n)) r.covered.insert(n);
    r.coverage = r.denominator.empty()
                     ? 0.0
                     : static_cast<double>(r.covered.size()) /
                           static_cast<double>(r.denominator.size());
    return r;
}

} // namespace assertforge::rtl
