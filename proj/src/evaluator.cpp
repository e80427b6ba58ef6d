// SPDX-License-Identifier: Apache-2.0
//
// Adjudication battery, syntax/bind checking, COI summarization, and the
// grid-shaped report (counts only; percentages are recomputed at render).

#include "assertforge/evaluator.hpp"

#include "assertforge/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace assertforge::eval {

const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::SyntaxErr: return "syntax_error";
    case Outcome::BindErr: return "bind_error";
    case Outcome::Fail: return "fail";
    case Outcome::Pass: return "pass";
    case Outcome::VacuousPass: return "vacuous_pass";
    case Outcome::Undetermined: return "undetermined";
    }
    return "?";
}

// ---- syntax / bind checking ----

std::vector<CheckedAssertion> check_syntax(const std::vector<AssertionRecord>& recs,
                                           const std::vector<SignalDefinition>& signals) {
    std::vector<CheckedAssertion> out;
    out.reserve(recs.size());
    for (const auto& rec : recs) {
        CheckedAssertion c;
        c.rec = rec;
        try {
            sva::PropertyAst ast = sva::parse_sva(rec.text);
            auto viols = sva::bind_signals(ast, signals);
            if (!viols.empty()) {
                c.bind_failed = true;
                c.detail = viols.front().str();
            } else {
                c.ast = std::move(ast);
            }
        } catch (const Error& e) {
            c.detail = e.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---- battery ----

namespace {

struct InputInfo {
    std::string name;
    int width = 1;
    bool is_clock = false;
    bool is_reset = false;
    bool active_low = false;  // resets only
};

std::vector<InputInfo> classify_inputs(const rtl::RtlDesign& design) {
    std::set<std::string> trig_clk, trig_rst_low, trig_rst_high;
    for (const auto& p : design.processes) {
        if (p.trigger.combinational) continue;
        trig_clk.insert(p.trigger.clock);
        if (p.trigger.has_reset) {
            (p.trigger.reset_edge == sva::Edge::Neg ? trig_rst_low : trig_rst_high)
                .insert(p.trigger.reset);
        }
    }
    std::vector<InputInfo> out;
    for (const auto& n : design.input_names()) {
        InputInfo ii;
        ii.name = n;
        ii.width = design.width_of(n);
        ii.is_clock = trig_clk.count(n) > 0 || rtl::is_clock_name(n);
        if (!ii.is_clock &&
            (trig_rst_low.count(n) || trig_rst_high.count(n) || rtl::is_reset_name(n))) {
            ii.is_reset = true;
            bool low = trig_rst_low.count(n) > 0;
            bool base = false, ntok = false;
            for (const auto& tok : text::name_tokens(n)) {
                if (tok == "rstn" || tok == "resetn" || tok == "nrst" || tok == "arstn")
                    low = true;
                if (tok == "rst" || tok == "reset" || tok == "arst") base = true;
                if (tok == "n" || tok == "ni") ntok = true;
            }
            ii.active_low = low || (base && ntok);
        }
        out.push_back(std::move(ii));
    }
    return out;
}

uint64_t width_mask(int w) { return Value::mask_of(w); }

} // namespace

std::vector<std::pair<std::string, rtl::Stimulus>> make_battery(const rtl::RtlDesign& design,
                                                                const Budget& budget) {
    const int n_traces = std::max(1, budget.n_traces);
    const int cycles = std::max(1, budget.n_cycles);
    const auto infos = classify_inputs(design);

    auto build = [&](const std::function<uint64_t(const InputInfo&, int)>& f) {
        rtl::Stimulus s;
        s.cycles = cycles;
        for (const auto& ii : infos) {
            auto& lane = s.inputs[ii.name];
            lane.reserve(cycles);
            for (int t = 0; t < cycles; ++t)
                lane.push_back(Value::of(f(ii, t) & width_mask(ii.width), 64));
        }
        return s;
    };
    auto active = [](const InputInfo& ii) -> uint64_t { return ii.active_low ? 0 : 1; };
    auto inactive = [](const InputInfo& ii) -> uint64_t { return ii.active_low ? 1 : 0; };

    std::vector<std::pair<std::string, rtl::Stimulus>> out;
    out.emplace_back("reset-pulse", build([&](const InputInfo& ii, int t) -> uint64_t {
        if (ii.is_clock) return 0;
        if (ii.is_reset) return t < 2 ? active(ii) : inactive(ii);
        return 0;
    }));
    out.emplace_back("all-zeros", build([](const InputInfo&, int) -> uint64_t { return 0; }));
    out.emplace_back("all-ones", build([](const InputInfo& ii, int) -> uint64_t {
        return ii.is_clock ? 0 : width_mask(ii.width);
    }));
    for (const auto& target : infos) {
        if (target.is_clock) continue;
        out.emplace_back("toggle:" + target.name,
                         build([&](const InputInfo& ii, int t) -> uint64_t {
                             if (ii.name == target.name) return (uint64_t)(t % 2);
                             if (ii.is_clock) return 0;
                             if (ii.is_reset) return inactive(ii);
                             return 0;
                         }));
    }
    if ((int)out.size() > n_traces) out.resize(n_traces);

    std::mt19937_64 rng(budget.seed);
    for (int k = 0; (int)out.size() < n_traces; ++k) {
        out.emplace_back("random:" + std::to_string(k),
                         build([&](const InputInfo& ii, int t) -> uint64_t {
                             if (ii.is_clock) return 0;
                             if (ii.is_reset) {
                                 if (t < 2) return active(ii);
                                 return rng() % 8 == 0 ? active(ii) : inactive(ii);
                             }
                             return rng();
                         }));
    }
    return out;
}

// ---- adjudication ----

namespace {

struct PreparedTrace {
    std::string label;
    rtl::Stimulus stimulus;
    rtl::Trace trace;
};

std::vector<PreparedTrace> prepare_traces(const rtl::RtlDesign& design, const Budget& budget) {
    std::vector<PreparedTrace> out;
    for (auto& [label, stim] : make_battery(design, budget)) {
        rtl::Trace tr = rtl::simulate(design, stim, stim.cycles);
        out.push_back({label, std::move(stim), std::move(tr)});
    }
    return out;
}

Verdict adjudicate_prepared(const sva::PropertyAst& prop,
                            const std::vector<PreparedTrace>& traces) {
    Verdict v;
    bool pass = false, undet = false;
    for (const auto& pt : traces) {
        TraceVerdict tv = eval_on_trace(prop, pt.trace);
        v.checked_cycles += pt.trace.length;
        if (tv.outcome == Outcome::Fail) {
            v.outcome = Outcome::Fail;
            v.fail_cycle = tv.fail_cycle;
            v.stimulus_name = pt.label;
            v.counterexample = pt.stimulus;
            return v;
        }
        pass = pass || tv.outcome == Outcome::Pass;
        undet = undet || tv.outcome == Outcome::Undetermined;
    }
    // Any non-vacuous pass with no fail counts as a pass; a trace cut at the
    // horizon does not demote a property another trace definitely matched.
    v.outcome = pass ? Outcome::Pass : undet ? Outcome::Undetermined : Outcome::VacuousPass;
    return v;
}

} // namespace

Verdict adjudicate(const sva::PropertyAst& prop, const rtl::RtlDesign& design,
                   const Budget& budget) {
    return adjudicate_prepared(prop, prepare_traces(design, budget));
}

// ---- rows ----

namespace {

constexpr int kRows = 7;
const char* kRowLabels[kRows] = {"IO Clock",    "IO Reset", "IO Control",   "IO Data",
                                 "Reg Control", "Reg Data", "From waveform"};

int row_of(const AssertionRecord& r) {
    const std::string src = text::lower(r.source);
    const std::string ty = text::lower(r.signal_type);
    if (src == "waveform") return 6;
    if (src == "arch_register") return ty == "control" ? 4 : 5;
    if (ty == "clock") return 0;
    if (ty == "reset") return 1;
    if (ty == "control") return 2;
    return 3;
}

Triple& cell_of(RowStats& row, const std::string& category) {
    const std::string c = text::lower(category);
    if (c == "width") return row.width;
    if (c == "connectivity") return row.conn;
    return row.func;
}

bool is_pass_status(Outcome o) { return o == Outcome::Pass || o == Outcome::VacuousPass; }

} // namespace

// ---- COI ----

CoiSummary compute_coi(const rtl::RtlDesign& design,
                       const std::vector<CheckedAssertion>& checked,
                       const std::vector<Verdict>& verdicts) {
    CoiSummary out;
    out.present = true;
    rtl::DepGraph g = rtl::build_depgraph(design);
    std::vector<sva::PropertyAst> all;
    std::map<int, std::vector<sva::PropertyAst>> by_row;
    for (size_t i = 0; i < checked.size(); ++i) {
        if (!checked[i].ast || !is_pass_status(verdicts[i].outcome)) continue;
        all.push_back(*checked[i].ast);
        by_row[row_of(checked[i].rec)].push_back(*checked[i].ast);
    }
    out.overall = rtl::coi_coverage(g, design, all).coverage;
    for (const auto& [row, props] : by_row)
        out.by_row[kRowLabels[row]] = rtl::coi_coverage(g, design, props).coverage;
    return out;
}

// ---- aggregation ----

EvalReport aggregate(const std::string& design_name,
                     const std::vector<CheckedAssertion>& checked,
                     const std::vector<Verdict>& verdicts, const CoiSummary& coi,
                     const Budget& budget) {
    EvalReport rep;
    rep.design = design_name;
    rep.budget = budget;
    rep.rows.resize(kRows);
    for (int i = 0; i < kRows; ++i) rep.rows[i].label = kRowLabels[i];
    rep.total.label = "Design Total";

    std::set<std::string> row_sigs[kRows], all_sigs;
    for (size_t i = 0; i < checked.size(); ++i) {
        const auto& c = checked[i];
        const Outcome o = verdicts[i].outcome;
        RowStats& row = rep.rows[row_of(c.rec)];
        const bool syn = c.ast.has_value();
        const bool pass = is_pass_status(o);
        for (Triple* t : {&cell_of(row, c.rec.category), &row.total,
                          &cell_of(rep.total, c.rec.category), &rep.total.total}) {
            t->gen += 1;
            t->syn += syn ? 1 : 0;
            t->pass += pass ? 1 : 0;
        }
        if (o == Outcome::VacuousPass) { row.vacuous++; rep.total.vacuous++; }
        if (o == Outcome::Undetermined) { row.undetermined++; rep.total.undetermined++; }
        if (o == Outcome::Fail) { row.failed++; rep.total.failed++; }
        if (!c.rec.signal.empty()) {
            row_sigs[row_of(c.rec)].insert(c.rec.signal);
            all_sigs.insert(c.rec.signal);
        }
    }
    for (int i = 0; i < kRows; ++i) rep.rows[i].signal_count = (int)row_sigs[i].size();
    rep.total.signal_count = (int)all_sigs.size();

    rep.coi = coi;
    for (auto& row : rep.rows) {
        auto it = coi.by_row.find(row.label);
        if (it != coi.by_row.end()) {
            row.coi_defined = true;
            row.coi = it->second;
        }
    }
    if (coi.present) {
        rep.total.coi_defined = true;
        rep.total.coi = coi.overall;
    }

    std::ostringstream b;
    b << "Verification is bounded trace checking (" << budget.n_traces << " traces x "
      << budget.n_cycles << " cycles, seed " << budget.seed
      << "), not an unbounded proof; reported passes are refutation-sound only.";
    rep.notes.push_back(b.str());
    rep.notes.push_back("Passed counts include vacuous passes (antecedent never observed); "
                        "vacuous and undetermined totals are reported alongside.");
    rep.notes.push_back("Undetermined outcomes (window cut by the trace horizon, or X-valued "
                        "sampling) are counted as not passing.");
    rep.notes.push_back("COI coverage is structural fan-in closure of pass-status assertions "
                        "over non-clock, non-reset signals.");
    return rep;
}

EvalRun evaluate_assertions(const std::string& design_name, const rtl::RtlDesign& design,
                            const std::vector<AssertionRecord>& recs, const Budget& budget) {
    EvalRun run;
    run.checked = check_syntax(recs, design.signals);
    const auto traces = prepare_traces(design, budget);
    run.verdicts.reserve(run.checked.size());
    for (const auto& c : run.checked) {
        if (!c.ast) {
            Verdict v;
            v.outcome = c.bind_failed ? Outcome::BindErr : Outcome::SyntaxErr;
            v.detail = c.detail;
            run.verdicts.push_back(std::move(v));
            continue;
        }
        run.verdicts.push_back(adjudicate_prepared(*c.ast, traces));
    }
    CoiSummary coi = compute_coi(design, run.checked, run.verdicts);
    run.report = aggregate(design_name, run.checked, run.verdicts, coi, budget);
    return run;
}

// ---- rendering ----

int pct_round(double pct) { return (int)std::llround(pct); }

std::string format_triple(const Triple& t) {
    std::ostringstream os;
    os << t.gen << "/" << t.syn << "/" << t.pass;
    return os.str();
}

std::string format_pct_pair(const Triple& t) {
    if (t.gen == 0) return "0%/0%";
    std::ostringstream os;
    os << pct_round(100.0 * t.syn / t.gen) << "%/" << pct_round(100.0 * t.pass / t.gen) << "%";
    return os.str();
}

namespace {

std::string coi_cell(const RowStats& r) {
    if (!r.coi_defined) return "/";
    return std::to_string(pct_round(100.0 * r.coi)) + "%";
}

std::string cat_cell(const Triple& t) { return t.gen == 0 ? "/" : format_triple(t); }

void md_row(std::ostringstream& os, const RowStats& r) {
    os << "| " << r.label << " | " << r.signal_count << " | " << cat_cell(r.width) << " | "
       << cat_cell(r.conn) << " | " << cat_cell(r.func) << " | " << format_triple(r.total)
       << " | " << r.vacuous << " | " << r.undetermined << " | " << r.failed << " | "
       << coi_cell(r) << " |\n";
}

std::string pct_cell(const Triple& t) { return t.gen == 0 ? "" : format_pct_pair(t); }

} // namespace

std::string render_report_md(const EvalReport& r) {
    std::ostringstream os;
    os << "# Assertion evaluation: " << r.design << "\n\n";
    os << "Budget: " << r.budget.n_traces << " traces x " << r.budget.n_cycles
       << " cycles, seed " << r.budget.seed << ".\n\n";
    os << "| Signal group | Signals | Width | Connectivity | Function | Signal Total |"
          " Vacuous | Undetermined | Failed | COI |\n";
    os << "| --- | --- | --- | --- | --- | --- | --- | --- | --- | --- |\n";
    for (const auto& row : r.rows) md_row(os, row);
    md_row(os, r.total);
    os << "| Percentage |  | " << pct_cell(r.total.width) << " | " << pct_cell(r.total.conn)
       << " | " << pct_cell(r.total.func) << " | " << format_pct_pair(r.total.total)
       << " |  |  |  |  |\n";
    os << "\n";
    os << "Cells show #generated/#syntax-correct/#passed assertions; passed includes "
          "vacuous passes. '/' marks categories not produced for a signal group.\n\n";
    os << "Percentage lines show syntax-correct% / passed% of generated assertions.\n\n";
    os << "Notes:\n";
    for (const auto& n : r.notes) os << "- " << n << "\n";
    return os.str();
}

namespace {

nlohmann::ordered_json triple_json(const Triple& t) {
    return {{"generated", t.gen}, {"syntax_correct", t.syn}, {"passed", t.pass}};
}

nlohmann::ordered_json row_json(const RowStats& r) {
    nlohmann::ordered_json j;
    j["label"] = r.label;
    j["signals"] = r.signal_count;
    j["width"] = triple_json(r.width);
    j["connectivity"] = triple_json(r.conn);
    j["function"] = triple_json(r.func);
    j["total"] = triple_json(r.total);
    j["vacuous"] = r.vacuous;
    j["undetermined"] = r.undetermined;
    j["failed"] = r.failed;
    if (r.coi_defined) j["coi"] = r.coi;
    else j["coi"] = nullptr;
    return j;
}

} // namespace

std::string render_report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["design"] = r.design;
    j["budget"] = {{"traces", r.budget.n_traces},
                   {"cycles", r.budget.n_cycles},
                   {"seed", r.budget.seed}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) j["rows"].push_back(row_json(row));
    j["total"] = row_json(r.total);
    const Triple& t = r.total.total;
    j["percentages"] = {
        {"syntax_correct", t.gen == 0 ? 0 : pct_round(100.0 * t.syn / t.gen)},
        {"passed", t.gen == 0 ? 0 : pct_round(100.0 * t.pass / t.gen)}};
    j["coi_overall"] = r.coi.present ? nlohmann::ordered_json(r.coi.overall)
                                     : nlohmann::ordered_json(nullptr);
    j["notes"] = r.notes;
    return j.dump(2) + "\n";
}

std::string render_summary_md(const std::vector<DesignLine>& lines) {
    std::ostringstream os;
    os << "| Design | Total | Correctness | COI coverage |\n";
    os << "| --- | --- | --- | --- |\n";
    double syn_sum = 0, pass_sum = 0, cov_sum = 0;
    for (const auto& l : lines) {
        os << "| " << l.name << " | " << format_triple(l.total) << " | "
           << format_pct_pair(l.total) << " | " << pct_round(100.0 * l.coverage) << "% |\n";
        if (l.total.gen > 0) {
            syn_sum += 100.0 * l.total.syn / l.total.gen;
            pass_sum += 100.0 * l.total.pass / l.total.gen;
        }
        cov_sum += 100.0 * l.coverage;
    }
    if (!lines.empty()) {
        const double n = (double)lines.size();
        os << "| Average |  | " << pct_round(syn_sum / n) << "%/" << pct_round(pass_sum / n)
           << "% | " << pct_round(cov_sum / n) << "% |\n";
    }
    os << "\nCorrectness shows syntax-correct% / passed% of generated assertions; the "
          "average line is the mean of the per-design percentages before rounding.\n";
    return os.str();
}

} // namespace assertforge::eval
