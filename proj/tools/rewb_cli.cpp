// Command-line front end for the backreference workbench.
//
//   rewb classify <expr>                     closure/closed-star report
//   rewb bounds <expr>                       counter bounds or divergence
//   rewb lang <expr> --max-len N             bounded language via one engine
//   rewb emit <expr> --target T              serialized construction
//   rewb check <expr> --max-len N            cross-engine equivalence
//   rewb corpus <file>                       classify + check over a corpus
//
// Exit codes: 0 success, 1 mismatch/divergence/red entry, 2 usage or input
// errors.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rewb/harness.hpp"

using nlohmann::json;
using namespace rewb;

namespace {

constexpr int kSchemaVersion = 1;

json bounds_to_json(const Bounds& b) {
    json out;
    out["kappa"] = b.kappa;
    out["theta"] = b.theta;
    out["sigma"] = b.sigma;
    out["rho"] = b.rho;
    out["depth"] = b.depth;
    out["reachable_count"] = b.reachable_count;
    out["diverged"] = false;
    return out;
}

json divergence_to_json(const DivergenceReport& d) {
    json out;
    out["diverged"] = true;
    out["cap"] = d.exceeded_cap;
    out["component"] = d.component;
    out["cell"] = d.cell;
    out["witness_cycle"] = d.describe();
    return out;
}

json classify_to_json(const ClassifyReport& report) {
    json out;
    out["schema_version"] = kSchemaVersion;
    out["rewb"] = report.text;
    out["kappa"] = report.kappa;
    out["closed"] = report.closed;
    out["closed_star"] = report.closed_star;
    if (report.bounds) out["bounds"] = bounds_to_json(*report.bounds);
    if (report.divergence) out["bounds"] = divergence_to_json(*report.divergence);
    return out;
}

void print_classify_text(const ClassifyReport& report) {
    std::cout << "rewb: " << report.text << "\n";
    std::cout << "kappa: " << report.kappa << "\n";
    std::cout << "closed: " << (report.closed ? "yes" : "no") << "\n";
    std::cout << "closed-star: " << (report.closed_star ? "yes" : "no") << "\n";
    if (report.bounds)
        std::cout << "theta: " << report.bounds->theta << "\nsigma: " << report.bounds->sigma
                  << "\nrho: " << report.bounds->rho << "\n";
    if (report.divergence) std::cout << "bounds: diverged (" << report.divergence->describe() << ")\n";
}

json check_to_json(const CheckReport& report, bool verbose, bool timings) {
    json out;
    out["schema_version"] = kSchemaVersion;
    out["rewb"] = report.text;
    out["max_len"] = report.max_len;
    out["oracle_saturated"] = report.oracle_saturated;
    out["required_ref_len"] = report.required_ref_len;
    out["ok"] = report.ok;
    json engines = json::array();
    for (const EngineReport& e : report.engines) {
        json je;
        je["name"] = e.name;
        je["ran"] = e.ran;
        je["exact"] = e.exact;
        if (!e.error.empty()) je["error"] = e.error;
        je["count"] = e.words.size();
        if (verbose) je["words"] = e.words;
        if (timings) je["millis"] = e.millis;
        engines.push_back(std::move(je));
    }
    out["engines"] = std::move(engines);
    json diffs = json::array();
    for (const PairDiff& d : report.diffs) {
        if (d.only_left.empty() && d.only_right.empty()) continue;
        json jd;
        jd["left"] = d.left;
        jd["right"] = d.right;
        jd["only_left"] = d.only_left;
        jd["only_right"] = d.only_right;
        diffs.push_back(std::move(jd));
    }
    out["differences"] = std::move(diffs);
    return out;
}

void print_check_text(const CheckReport& report, bool verbose, bool timings) {
    std::cout << "rewb: " << report.text << "\n";
    std::cout << "max-len: " << report.max_len << "\n";
    for (const EngineReport& e : report.engines) {
        std::cout << e.name << ": ";
        if (!e.ran) {
            std::cout << "error (" << e.error << ")";
        } else {
            std::cout << e.words.size() << " words" << (e.exact ? "" : " (inexact)");
            if (timings) std::cout << " [" << e.millis << " ms]";
        }
        std::cout << "\n";
        if (verbose && e.ran)
            for (const std::string& w : e.words) std::cout << "  " << w << "\n";
    }
    std::cout << "oracle saturated: " << (report.oracle_saturated ? "yes" : "no") << "\n";
    for (const PairDiff& d : report.diffs) {
        if (d.only_left.empty() && d.only_right.empty()) continue;
        std::cout << "MISMATCH " << d.left << " vs " << d.right << ":\n";
        for (const std::string& w : d.only_left) std::cout << "  only " << d.left << ": " << w << "\n";
        for (const std::string& w : d.only_right) std::cout << "  only " << d.right << ": " << w << "\n";
    }
    std::cout << (report.ok ? "OK" : "FAIL") << "\n";
}

RewbPtr parse_checked(const std::string& text) {
    RewbPtr r = parse(text);
    auto violations = validate(r);
    if (!violations.empty())
        throw std::runtime_error("invalid expression: " + violations.front().reason + " (index " +
                                 std::to_string(violations.front().index) + ") at " +
                                 violations.front().path);
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for regular expressions with backreferences"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    // classify
    auto* cmd_classify = app.add_subcommand("classify", "closure and closed-star classification");
    cmd_classify->fallthrough();
    std::string classify_expr;
    int classify_cap = 64;
    cmd_classify->add_option("rewb", classify_expr, "expression")->required();
    cmd_classify->add_option("--cap", classify_cap, "counter cap for the bound fixpoint");

    // bounds
    auto* cmd_bounds = app.add_subcommand("bounds", "counter bounds via the backward fixpoint");
    cmd_bounds->fallthrough();
    std::string bounds_expr;
    int bounds_cap = 64;
    cmd_bounds->add_option("rewb", bounds_expr, "expression")->required();
    cmd_bounds->add_option("--cap", bounds_cap, "counter cap");

    // lang
    auto* cmd_lang = app.add_subcommand("lang", "bounded language of an expression");
    cmd_lang->fallthrough();
    std::string lang_expr, lang_engine = "oracle";
    std::size_t lang_max_len = 8, lang_max_ref = 0, lang_budget = 10'000'000;
    int lang_cap = 64;
    cmd_lang->add_option("rewb", lang_expr, "expression")->required();
    cmd_lang->add_option("--max-len", lang_max_len, "maximum word length")->required();
    cmd_lang->add_option("--max-ref-len", lang_max_ref, "member length bound (0 = auto)");
    cmd_lang->add_option("--engine", lang_engine, "word engine")
        ->check(CLI::IsMember({"oracle", "pmcfg", "mcfg", "nesa"}));
    cmd_lang->add_option("--budget", lang_budget, "derivation/search budget");
    cmd_lang->add_option("--cap", lang_cap, "counter cap");

    // emit
    auto* cmd_emit = app.add_subcommand("emit", "serialized construction");
    cmd_emit->fallthrough();
    std::string emit_expr, emit_target, emit_trace;
    int emit_cap = 64;
    cmd_emit->add_option("rewb", emit_expr, "expression")->required();
    cmd_emit->add_option("--target", emit_target, "construction")
        ->required()
        ->check(CLI::IsMember({"pmcfg", "mcfg", "nesa", "nfa"}));
    cmd_emit->add_option("--cap", emit_cap, "counter cap");
    cmd_emit->add_option("--trace", emit_trace,
                         "ref-string (pmcfg/mcfg) or word (nesa) to trace instead of emitting");

    // check
    auto* cmd_check = app.add_subcommand("check", "cross-engine equivalence");
    cmd_check->fallthrough();
    std::string check_expr, check_engines = "oracle,pmcfg";
    CheckOptions check_options;
    bool check_verbose = false, check_timings = false;
    cmd_check->add_option("rewb", check_expr, "expression")->required();
    cmd_check->add_option("--max-len", check_options.max_len, "maximum word length")->required();
    cmd_check->add_option("--engines", check_engines, "comma-separated engine list");
    cmd_check->add_option("--budget", check_options.budget, "derivation/search budget");
    cmd_check->add_option("--cap", check_options.cap, "counter cap");
    cmd_check->add_flag("--verbose", check_verbose, "include word lists");
    cmd_check->add_flag("--timings", check_timings, "include engine runtimes (non-deterministic)");

    // corpus
    auto* cmd_corpus = app.add_subcommand("corpus", "classify + check every corpus entry");
    cmd_corpus->fallthrough();
    std::string corpus_path;
    CheckOptions corpus_options;
    corpus_options.max_len = 7;
    unsigned corpus_jobs = 0;
    bool corpus_verbose = false;
    cmd_corpus->add_option("file", corpus_path, "corpus file (one expression per line)")->required();
    cmd_corpus->add_option("--max-len", corpus_options.max_len, "maximum word length");
    cmd_corpus->add_option("--budget", corpus_options.budget, "derivation/search budget");
    cmd_corpus->add_option("--cap", corpus_options.cap, "counter cap");
    cmd_corpus->add_option("--jobs", corpus_jobs, "worker threads (0 = hardware)");
    cmd_corpus->add_flag("--verbose", corpus_verbose, "per-entry engine details");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_classify) {
            ClassifyReport report = classify(*parse_checked(classify_expr), classify_cap);
            if (format == "json") std::cout << classify_to_json(report).dump(2) << "\n";
            else print_classify_text(report);
            return 0;
        }

        if (*cmd_bounds) {
            RewbPtr r = parse_checked(bounds_expr);
            ExtNfa nfa = build_nfa(r);
            json out;
            out["schema_version"] = kSchemaVersion;
            out["rewb"] = to_string(r);
            try {
                Bounds bounds = compute_bounds(nfa, open_sets(nfa), bounds_cap);
                out.update(bounds_to_json(bounds));
                if (format == "json") std::cout << out.dump(2) << "\n";
                else
                    std::cout << "kappa: " << bounds.kappa << "\ntheta: " << bounds.theta
                              << "\nsigma: " << bounds.sigma << "\nrho: " << bounds.rho
                              << "\nreachable: " << bounds.reachable_count << "\n";
                return 0;
            } catch (const BoundsDiverged& e) {
                out.update(divergence_to_json(e.report()));
                if (format == "json") std::cout << out.dump(2) << "\n";
                else std::cout << "diverged: " << e.report().describe() << "\n";
                return 1;
            }
        }

        if (*cmd_lang) {
            RewbPtr r = parse_checked(lang_expr);
            std::set<std::string> words;
            bool saturated = true;
            if (lang_engine == "oracle") {
                OracleResult oracle = lang_oracle(r, lang_max_len, lang_max_ref);
                words = oracle.words;
                saturated = oracle.saturated;
            } else {
                CheckOptions options;
                options.max_len = lang_max_len;
                options.budget = lang_budget;
                options.cap = lang_cap;
                options.engines = {lang_engine};
                CheckReport report = check(*r, options);
                if (!report.engines[0].ran) throw std::runtime_error(report.engines[0].error);
                words = report.engines[0].words;
                saturated = report.engines[0].exact;
            }
            if (format == "json") {
                json out;
                out["schema_version"] = kSchemaVersion;
                out["rewb"] = to_string(r);
                out["engine"] = lang_engine;
                out["saturated"] = saturated;
                out["words"] = words;
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << "saturated: " << (saturated ? "true" : "false") << "\n";
                for (const std::string& w : words) std::cout << w << "\n";
            }
            return saturated ? 0 : 1;
        }

        if (*cmd_emit) {
            RewbPtr r = parse_checked(emit_expr);
            if (emit_target == "nfa") {
                ExtNfa nfa = build_nfa(r);
                OpenSetTable table = open_sets(nfa);
                std::cout << dump(nfa, &table);
            } else if (emit_target == "pmcfg") {
                PmcfgConstruction c = build_pmcfg(r);
                if (emit_trace.empty()) {
                    std::cout << serialize(c.grammar);
                } else {
                    RefString v = parse_ref_string(emit_trace);
                    for (const StringTuple& tuple : functional_deref_trace(c, v)) {
                        std::cout << "(";
                        for (std::size_t i = 0; i < tuple.size(); ++i)
                            std::cout << (i ? ", " : "") << "'" << tuple[i] << "'";
                        std::cout << ")\n";
                    }
                }
            } else if (emit_target == "mcfg") {
                McfgConstruction c = build_mcfg(r, emit_cap);
                if (emit_trace.empty()) {
                    std::cout << serialize(c.grammar);
                } else {
                    RefString v = parse_ref_string(emit_trace);
                    for (const McfgTraceStep& step : mcfg_block_trace(c, v)) {
                        std::cout << "x='" << step.tuple[0] << "'";
                        for (int k = 1; k <= c.kappa; ++k) {
                            std::cout << " y" << k << "=(";
                            for (long long rr = 1; rr <= c.rho; ++rr)
                                std::cout << (rr > 1 ? "," : "")
                                          << step.tuple[static_cast<std::size_t>((k - 1) * c.rho + rr)];
                            std::cout << ")[valid " << step.valid_copies[k - 1] << "]";
                        }
                        std::cout << "\n";
                    }
                }
            } else if (emit_target == "nesa") {
                Nesa n = build_nesa(r, emit_cap);
                if (emit_trace.empty()) {
                    std::cout << dump(n);
                } else {
                    OracleResult oracle = lang_oracle(r, emit_trace.size());
                    if (!oracle.saturated)
                        throw std::runtime_error("no certified member-length bound available");
                    auto ids = trace_accepting_run(n, emit_trace, 10'000'000, oracle.required_ref_len);
                    if (!ids) {
                        std::cout << "rejected\n";
                        return 1;
                    }
                    for (const InstDesc& id : *ids) std::cout << to_string(id, emit_trace) << "\n";
                }
            }
            return 0;
        }

        if (*cmd_check) {
            check_options.engines.clear();
            std::istringstream es(check_engines);
            std::string name;
            while (std::getline(es, name, ',')) check_options.engines.push_back(name);
            CheckReport report = check(*parse_checked(check_expr), check_options);
            if (format == "json") std::cout << check_to_json(report, check_verbose, check_timings).dump(2) << "\n";
            else print_check_text(report, check_verbose, check_timings);
            return report.ok ? 0 : 1;
        }

        if (*cmd_corpus) {
            std::ifstream in(corpus_path);
            if (!in) throw std::runtime_error("cannot open corpus file " + corpus_path);
            std::vector<CorpusEntry> entries = parse_corpus(in);
            CorpusReport report = run_corpus(entries, corpus_options, corpus_jobs);
            if (format == "json") {
                json out;
                out["schema_version"] = kSchemaVersion;
                out["ok"] = report.ok;
                out["passed"] = report.passed;
                out["total"] = report.entries.size();
                json jentries = json::array();
                for (const CorpusEntryResult& e : report.entries) {
                    json je;
                    je["rewb"] = e.entry.text;
                    je["line"] = e.entry.line;
                    je["ok"] = e.ok;
                    if (!e.error.empty()) je["error"] = e.error;
                    if (e.classify) {
                        je["kappa"] = e.classify->kappa;
                        je["closed"] = e.classify->closed;
                        je["closed_star"] = e.classify->closed_star;
                    }
                    for (const auto& [key, detail] : e.expectation_failures)
                        je["expectation_failures"].push_back(key + ": " + detail);
                    if (e.check) je["check"] = check_to_json(*e.check, corpus_verbose, false);
                    jentries.push_back(std::move(je));
                }
                out["entries"] = std::move(jentries);
                std::cout << out.dump(2) << "\n";
            } else {
                for (const CorpusEntryResult& e : report.entries) {
                    std::cout << (e.ok ? "[ok]   " : "[FAIL] ") << e.entry.text;
                    if (!e.error.empty()) std::cout << "  error: " << e.error;
                    for (const auto& [key, detail] : e.expectation_failures)
                        std::cout << "  " << key << " " << detail;
                    std::cout << "\n";
                }
                std::cout << report.passed << "/" << report.entries.size() << " entries ok\n";
            }
            return report.ok ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
