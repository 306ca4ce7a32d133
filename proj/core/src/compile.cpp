#include "sddrev/compile.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sddrev/error.hpp"

namespace sddrev {

namespace {

struct Lists {
    int n = 0;
    std::vector<std::vector<Literal>> lists;
};

// Shared reader for the DIMACS-style CNF and DNF layouts.
Lists parse_lists(std::string_view text, std::string_view kind) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    long long n = 0, m = 0;
    Lists out;
    std::vector<Literal> current;
    std::size_t open_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c" || tok[0] == 'c' || tok[0] == '%') continue;
        if (tok == "p") {
            std::string fmt;
            if (header) throw ParseError("duplicate problem line", lineno);
            if (!(ls >> fmt >> n >> m) || fmt != kind || n < 0 || m < 0) {
                throw ParseError("expected 'p " + std::string(kind) + " <vars> <count>'", lineno);
            }
            header = true;
            continue;
        }
        if (!header) throw ParseError("missing 'p " + std::string(kind) + "' header", lineno);
        do {
            long long v = 0;
            try {
                std::size_t used = 0;
                v = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError("not an integer: '" + tok + "'", lineno);
            }
            if (v == 0) {
                out.lists.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (v > n || -v > n) {
                throw ParseError("literal " + std::to_string(v) + " exceeds declared variable count " + std::to_string(n), lineno);
            }
            if (current.empty()) open_line = lineno;
            current.push_back(Literal::from_int(static_cast<int>(v)));
        } while (ls >> tok);
    }
    if (!header) throw ParseError("missing 'p " + std::string(kind) + "' header", lineno);
    if (!current.empty()) throw ParseError("unterminated list (missing 0)", open_line);
    if (static_cast<long long>(out.lists.size()) != m) {
        throw ParseError("header declares " + std::to_string(m) + " entries, found " + std::to_string(out.lists.size()), 0);
    }
    out.n = static_cast<int>(n);
    return out;
}

std::string serialize_lists(std::string_view kind, int n, const std::vector<std::vector<Literal>>& lists) {
    std::ostringstream out;
    out << "p " << kind << ' ' << n << ' ' << lists.size() << '\n';
    for (const auto& l : lists) {
        for (const auto& lit : l) out << lit.to_int() << ' ';
        out << "0\n";
    }
    return out.str();
}

}  // namespace

Formula CnfInstance::to_formula() const {
    if (clauses.empty()) return Formula::top();
    std::vector<Formula> cs;
    for (const auto& c : clauses) {
        if (c.empty()) {
            cs.push_back(Formula::bottom());
            continue;
        }
        std::vector<Formula> lits;
        for (const auto& l : c) lits.push_back(Formula::literal(l));
        cs.push_back(lits.size() == 1 ? lits.front() : Formula::disjunction(std::move(lits)));
    }
    return cs.size() == 1 ? cs.front() : Formula::conjunction(std::move(cs));
}

bool DnfInstance::complete() const {
    return std::all_of(terms.begin(), terms.end(), [&](const Term& t) { return static_cast<int>(t.size()) == n; });
}

Formula DnfInstance::to_formula() const {
    if (terms.empty()) return Formula::bottom();
    std::vector<Formula> ts;
    for (const auto& t : terms) {
        if (t.empty()) {
            ts.push_back(Formula::top());
            continue;
        }
        std::vector<Formula> lits;
        for (const auto& l : t) lits.push_back(Formula::literal(l));
        ts.push_back(lits.size() == 1 ? lits.front() : Formula::conjunction(std::move(lits)));
    }
    return ts.size() == 1 ? ts.front() : Formula::disjunction(std::move(ts));
}

CnfInstance parse_dimacs(std::string_view text) {
    Lists l = parse_lists(text, "cnf");
    return {l.n, std::move(l.lists)};
}

std::string serialize_dimacs(const CnfInstance& cnf) { return serialize_lists("cnf", cnf.n, cnf.clauses); }

DnfInstance parse_dnf(std::string_view text) {
    Lists l = parse_lists(text, "dnf");
    for (const auto& t : l.lists) {
        std::set<Var> seen;
        for (const auto& lit : t)
            if (!seen.insert(lit.var).second) throw ParseError("term repeats variable x" + std::to_string(lit.var), 0);
    }
    return {l.n, std::move(l.lists)};
}

std::string serialize_dnf(const DnfInstance& dnf) { return serialize_lists("dnf", dnf.n, dnf.terms); }

DnfInstance complete_dnf(const DnfInstance& dnf, std::size_t max_terms) {
    DnfInstance out{dnf.n, {}};
    for (const auto& t : dnf.terms) {
        std::vector<bool> present(static_cast<std::size_t>(dnf.n) + 1, false);
        for (const auto& l : t) {
            if (l.var == 0 || static_cast<int>(l.var) > dnf.n) throw InputError("term literal outside 1..n");
            if (present[l.var]) throw InputError("term repeats variable x" + std::to_string(l.var));
            present[l.var] = true;
        }
        std::vector<Var> missing;
        for (Var v = 1; v <= static_cast<Var>(dnf.n); ++v)
            if (!present[v]) missing.push_back(v);
        if (missing.size() >= 63 || out.terms.size() + (std::size_t{1} << missing.size()) > max_terms) {
            throw CapacityError("completed DNF exceeds " + std::to_string(max_terms) + " terms");
        }
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << missing.size()); ++mask) {
            Term full = t;
            for (std::size_t i = 0; i < missing.size(); ++i) full.push_back({missing[i], ((mask >> i) & 1U) == 0});
            std::sort(full.begin(), full.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
            out.terms.push_back(std::move(full));
        }
    }
    return out;
}

NodeId compile_formula(SddManager& m, const Formula& f) {
    using K = Formula::Kind;
    if (static_cast<int>(f.max_var()) > m.var_count()) {
        throw InputError("formula mentions x" + std::to_string(f.max_var()) + " outside the vtree");
    }
    switch (f.kind()) {
        case K::Const: return m.constant(f.value());
        case K::Lit: return m.literal(f.lit());
        case K::Not: return m.negate(compile_formula(m, f.children()[0]));
        case K::And:
        case K::Or: {
            const BoolOp op = f.kind() == K::And ? BoolOp::And : BoolOp::Or;
            NodeId acc = compile_formula(m, f.children()[0]);
            for (std::size_t i = 1; i < f.children().size(); ++i) acc = m.apply(acc, compile_formula(m, f.children()[i]), op);
            return acc;
        }
        case K::Implies:
            return m.apply(compile_formula(m, f.children()[0]), compile_formula(m, f.children()[1]), BoolOp::Implies);
        case K::Iff:
            return m.apply(compile_formula(m, f.children()[0]), compile_formula(m, f.children()[1]), BoolOp::Iff);
    }
    return kFalse;
}

NodeId compile_cnf(SddManager& m, const CnfInstance& cnf) {
    if (cnf.n > m.var_count()) throw InputError("CNF declares more variables than the vtree has");
    NodeId acc = kTrue;
    for (const auto& clause : cnf.clauses) {
        NodeId c = kFalse;
        for (const auto& l : clause) c = m.disjoin(c, m.literal(l));
        acc = m.conjoin(acc, c);
    }
    return acc;
}

NodeId compile_term(SddManager& m, const Term& t) {
    std::set<Var> seen;
    for (const auto& l : t) {
        if (static_cast<int>(l.var) > m.var_count() || l.var == 0) throw InputError("term literal outside the vtree");
        if (!seen.insert(l.var).second) throw InputError("term repeats variable x" + std::to_string(l.var));
    }
    return m.term(t);
}

NodeId compile_dnf(SddManager& m, const DnfInstance& dnf) {
    NodeId acc = kFalse;
    for (const auto& t : dnf.terms) acc = m.disjoin(acc, compile_term(m, t));
    return acc;
}

}  // namespace sddrev
