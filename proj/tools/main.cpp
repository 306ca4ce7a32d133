#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sddrev/bench.hpp"
#include "sddrev/compile.hpp"
#include "sddrev/error.hpp"
#include "sddrev/postulates.hpp"
#include "sddrev/revision.hpp"

namespace {

using namespace sddrev;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Raised for bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write " + path);
}

struct Input {
    enum class Kind { Cnf, Dnf, Sdd, Expression } kind = Kind::Expression;
    std::string path;
    std::string text;
    int n = 0;  // 0 when the file does not fix it
    CnfInstance cnf;
    DnfInstance dnf;
    Formula formula;
};

Input load(const std::string& path) {
    Input in;
    in.path = path;
    in.text = slurp(path);
    std::istringstream lines(in.text);
    std::string line, first;
    while (std::getline(lines, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line[0] == '#' || line == "c" || line.rfind("c ", 0) == 0) continue;
        first = line;
        break;
    }
    try {
        if (first.rfind("p cnf", 0) == 0) {
            in.kind = Input::Kind::Cnf;
            in.cnf = parse_dimacs(in.text);
            in.n = in.cnf.n;
            in.formula = in.cnf.to_formula();
        } else if (first.rfind("p dnf", 0) == 0) {
            in.kind = Input::Kind::Dnf;
            in.dnf = parse_dnf(in.text);
            in.n = in.dnf.n;
            in.formula = in.dnf.to_formula();
        } else if (first.rfind("sdd", 0) == 0) {
            in.kind = Input::Kind::Sdd;
        } else {
            std::string expr;
            std::istringstream again(in.text);
            while (std::getline(again, line))
                if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t\r")] != '#')
                    expr += line + ' ';
            in.formula = parse_expression(expr);
            in.n = static_cast<int>(in.formula.max_var());
        }
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line());
    }
    return in;
}

Vtree make_vtree(const std::string& choice, int n) {
    if (choice == "balanced") return Vtree::balanced(std::max(n, 1));
    if (choice == "rightlinear") return Vtree::right_linear(std::max(n, 1));
    Vtree t = Vtree::parse(slurp(choice));
    if (t.var_count() < n) {
        throw InputError("vtree " + choice + " has " + std::to_string(t.var_count()) + " variables, input needs " +
                         std::to_string(n));
    }
    return t;
}

int needed_vars(const std::vector<const Input*>& inputs, int floor) {
    int n = floor;
    for (const Input* in : inputs) {
        if (in->kind == Input::Kind::Sdd && n == 0)
            throw InputError(in->path + ": an SDD file needs --vtree <path> or --vars");
        n = std::max(n, in->n);
    }
    return n;
}

NodeId compile_input(SddManager& m, const Input& in) {
    switch (in.kind) {
        case Input::Kind::Cnf: return compile_cnf(m, in.cnf);
        case Input::Kind::Dnf: return compile_dnf(m, in.dnf);
        case Input::Kind::Sdd:
            try {
                return m.parse(in.text);
            } catch (const ParseError& e) {
                throw ParseError(in.path + ": " + e.what(), e.line());
            }
        case Input::Kind::Expression: return compile_formula(m, in.formula);
    }
    return kFalse;
}

// Variable count implied by --vtree <path>, else 0.
int vtree_floor(const std::string& choice, int vars) {
    if (choice == "balanced" || choice == "rightlinear") return vars;
    return std::max(vars, Vtree::parse(slurp(choice)).var_count());
}

struct Common {
    std::string vtree = "balanced";
    int vars = 0;
    std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--vtree", c.vtree, "balanced, rightlinear, or a vtree file")->capture_default_str();
    cmd->add_option("--vars", c.vars, "variable count when inputs do not fix it")->check(CLI::NonNegativeNumber);
    cmd->add_option("-o,--output", c.output, "write the resulting SDD here");
}

int cmd_compile(const Common& c, const std::string& path) {
    const Input in = load(path);
    SddManager m(make_vtree(c.vtree, needed_vars({&in}, vtree_floor(c.vtree, c.vars))));
    const NodeId s = compile_input(m, in);
    if (!c.output.empty()) write_file(c.output, m.serialize(s));
    std::cout << "size=" << m.size(s) << " mc=" << to_string(m.model_count(s)) << '\n';
    return 0;
}

int cmd_mc(const Common& c, const std::string& path) {
    const Input in = load(path);
    SddManager m(make_vtree(c.vtree, needed_vars({&in}, vtree_floor(c.vtree, c.vars))));
    std::cout << "mc=" << to_string(m.model_count(compile_input(m, in))) << '\n';
    return 0;
}

int cmd_equiv(const Common& c, const std::string& a, const std::string& b) {
    const Input ia = load(a), ib = load(b);
    SddManager m(make_vtree(c.vtree, needed_vars({&ia, &ib}, vtree_floor(c.vtree, c.vars))));
    const bool same = compile_input(m, ia) == compile_input(m, ib);
    std::cout << "equivalent=" << (same ? "true" : "false") << '\n';
    return 0;
}

struct ReviseFlags {
    int max_order = -1;
    std::string fallback = "fail";
    bool dnf_complete = false;
    bool collection = false;
    bool intersect_each = false;
};

int cmd_revise(const Common& c, const ReviseFlags& f, const std::string& kb_path, const std::string& mu_path) {
    const Input kb = load(kb_path), mu = load(mu_path);
    SddManager m(make_vtree(c.vtree, needed_vars({&kb, &mu}, vtree_floor(c.vtree, c.vars))));
    const NodeId psi = compile_input(m, kb);
    RevisionOptions options;
    options.max_order = f.max_order;
    options.complete_dnf = f.dnf_complete;
    options.intersect_each = f.intersect_each;

    RevisionResult r;
    if (mu.kind == Input::Kind::Dnf && !f.collection) {
        r = revise_dnf(m, psi, mu.dnf, options);
    } else {
        const NodeId q = compile_input(m, mu);
        r = f.collection ? revise_collection(m, psi, q, options) : revise(m, psi, q, options);
    }

    std::cout << "k=" << r.order << " mode=" << to_string(r.mode);
    if (r.mode == RevisionMode::BoundExceeded) {
        std::cout << '\n';
        // Reaching the bound means psi and mu are inconsistent, so the
        // conjoin fallback has nothing to offer either.
        std::cerr << "revision order exceeds --max-order " << f.max_order;
        if (f.fallback == "conjoin-if-consistent") std::cerr << "; psi and mu are inconsistent, no fallback applies";
        std::cerr << '\n';
        return kDomainError;
    }
    if (f.collection) {
        std::size_t total = 0;
        for (NodeId x : r.collection) total += m.size(x);
        std::cout << " members=" << r.collection.size() << " size=" << total << '\n';
        if (!c.output.empty()) {
            std::string all;
            for (NodeId x : r.collection) all += m.serialize(x);
            write_file(c.output, all);
        }
        return 0;
    }
    std::cout << " size=" << m.size(*r.result) << " mc=" << to_string(m.model_count(*r.result)) << '\n';
    if (!c.output.empty()) write_file(c.output, m.serialize(*r.result));
    return 0;
}

int cmd_check(const Common& c, const std::string& op_name, const std::string& kb_path, const std::string& mu_path) {
    const Input kb = load(kb_path), mu = load(mu_path);
    if (kb.kind == Input::Kind::Sdd || mu.kind == Input::Kind::Sdd) throw InputError("check needs formula, CNF or DNF inputs");
    const int n = std::max({kb.n, mu.n, c.vars, 1});
    if (n > kOracleCap) throw CapacityError("check enumerates models; at most " + std::to_string(kOracleCap) + " variables");
    RevisionOperator op;
    if (op_name == "sdd")
        op = sdd_revision;
    else if (op_name == "oracle")
        op = oracle_revision;
    else
        op = [](const Formula& p, const Formula&, int width) { return models(p, width); };
    bool all = true;
    for (const auto& v : check_postulates(op, kb.formula, mu.formula, n, default_probes(kb.formula, mu.formula, n))) {
        std::cout << v.name << ' ' << (v.holds ? "PASS" : "FAIL") << '\n';
        if (!v.holds) std::cerr << v.name << ": " << v.detail << '\n';
        all = all && v.holds;
    }
    return all ? 0 : kDomainError;
}

std::vector<int> parse_ns(const std::vector<std::string>& raw) {
    std::vector<int> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stoi(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw UsageError("--n expects integers, got '" + tok + "'");
            }
        }
    }
    return out;
}

int cmd_bench(BenchConfig cfg, const std::vector<std::string>& ns, double timeout, const std::string& out,
              const std::string& records_path, const std::string& plot_path) {
    if (!ns.empty()) cfg.ns = parse_ns(ns);
    cfg.timeout = std::chrono::duration<double>(timeout);
    try {
        cfg.validate();
    } catch (const InputError& e) {
        throw UsageError(e.what());
    }
    const auto records = run_bench(cfg);
    const std::string csv = summary_csv(summarize(records));
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    if (!records_path.empty()) write_file(records_path, records_csv(records));
    if (!plot_path.empty()) write_file(plot_path, plot_script(out.empty() ? "summary.csv" : out));
    std::size_t rejected = 0, skipped = 0;
    for (const auto& r : records) {
        if (r.pipeline != kPipelineA) continue;
        rejected += static_cast<std::size_t>(r.rejected);
        if (!r.skip_reason.empty()) ++skipped;
    }
    std::cerr << "instances=" << records.size() / 2 << " rejected_pairs=" << rejected << " skipped=" << skipped << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dalal belief revision on sentential decision diagrams"};
    app.require_subcommand(1);

    Common common;
    std::string in_a, in_b;

    auto* compile = app.add_subcommand("compile", "compile a CNF, DNF or expression file");
    add_common(compile, common);
    compile->add_option("input", in_a)->required();

    auto* mc = app.add_subcommand("mc", "model count of an input");
    add_common(mc, common);
    mc->add_option("input", in_a)->required();

    auto* equiv = app.add_subcommand("equiv", "check two inputs for equivalence");
    add_common(equiv, common);
    equiv->add_option("a", in_a)->required();
    equiv->add_option("b", in_b)->required();

    ReviseFlags rf;
    auto* revise_cmd = app.add_subcommand("revise", "revise a knowledge base by new information");
    add_common(revise_cmd, common);
    revise_cmd->add_option("kb", in_a)->required();
    revise_cmd->add_option("mu", in_b)->required();
    revise_cmd->add_option("--max-order", rf.max_order, "largest relaxation order; negative means n");
    revise_cmd->add_option("--fallback", rf.fallback, "behaviour when the bound is exceeded")
        ->check(CLI::IsMember({"fail", "conjoin-if-consistent"}))
        ->capture_default_str();
    revise_cmd->add_flag("--dnf-complete", rf.dnf_complete, "complete an incomplete DNF before revising");
    revise_cmd->add_flag("--collection", rf.collection, "keep one SDD per compatible semi-resolvent");
    revise_cmd->add_flag("--intersect-each", rf.intersect_each, "conjoin each semi-resolvent with mu as found");

    std::string op_name = "sdd";
    auto* check = app.add_subcommand("check", "check postulates R1-R6 on a small instance");
    check->add_option("kb", in_a)->required();
    check->add_option("mu", in_b)->required();
    check->add_option("--vars", common.vars, "variable count")->check(CLI::NonNegativeNumber);
    check->add_option("--operator", op_name, "operator under test")
        ->check(CLI::IsMember({"sdd", "oracle", "ignore-mu"}))
        ->capture_default_str();

    BenchConfig cfg;
    cfg.jobs = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    std::vector<std::string> ns;
    double timeout = 60.0;
    std::string bench_out, records_path, plot_path;
    auto* bench = app.add_subcommand("bench", "random 3-CNF revision size experiment");
    bench->add_option("--n", ns, "variable counts (repeat or comma-separate)");
    bench->add_option("--reps", cfg.reps, "instances per n")->capture_default_str();
    bench->add_option("--seed", cfg.seed, "run seed")->capture_default_str();
    bench->add_option("--timeout", timeout, "seconds per pipeline")->capture_default_str();
    bench->add_option("--width", cfg.width, "literals per clause")->capture_default_str();
    bench->add_option("--clause-ratio", cfg.clause_ratio, "clauses per variable")->capture_default_str();
    bench->add_option("--max-order", cfg.max_order, "relaxation order cap")->capture_default_str();
    bench->add_option("--max-attempts", cfg.max_attempts, "resampling budget per instance")->capture_default_str();
    bench->add_option("--jobs", cfg.jobs, "worker threads");
    bench->add_flag("--require-inconsistent", cfg.require_inconsistent, "also reject consistent pairs");
    bench->add_flag("--intersect-each", cfg.intersect_each, "conjoin each semi-resolvent with mu as found");
    bench->add_option("-o,--output", bench_out, "summary CSV path (default stdout)");
    bench->add_option("--records", records_path, "per-instance CSV path");
    bench->add_option("--plot-script", plot_path, "write a matplotlib script for the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*compile) return cmd_compile(common, in_a);
        if (*mc) return cmd_mc(common, in_a);
        if (*equiv) return cmd_equiv(common, in_a, in_b);
        if (*revise_cmd) return cmd_revise(common, rf, in_a, in_b);
        if (*check) return cmd_check(common, op_name, in_a, in_b);
        if (*bench) return cmd_bench(cfg, ns, timeout, bench_out, records_path, plot_path);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kUsageError;
}
