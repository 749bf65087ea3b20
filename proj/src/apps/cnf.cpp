#include <qsearch/apps.hpp>

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace qsearch {

Clause make_clause(std::initializer_list<int> literals) {
    if (literals.size() > 3) {
        throw ParameterError("make_clause: at most three literals");
    }
    Clause c;
    for (int lit : literals) {
        c.literals[static_cast<std::size_t>(c.size++)] = lit;
    }
    return c;
}

Cnf3Formula::Cnf3Formula(int n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
    if (n < 1) {
        throw ParameterError("Cnf3Formula: need at least one variable");
    }
    for (const Clause& c : clauses_) {
        if (c.size < 1 || c.size > 3) {
            throw ParameterError("Cnf3Formula: clauses need one to three literals");
        }
        for (int i = 0; i < c.size; ++i) {
            const int v = std::abs(c.literals[static_cast<std::size_t>(i)]);
            if (v < 1 || v > n) {
                throw ParameterError("Cnf3Formula: literal references variable outside [1, n]");
            }
        }
    }
}

bool Cnf3Formula::satisfied_by(const Clause& c, const Assignment& a) const {
    for (int i = 0; i < c.size; ++i) {
        const int lit = c.literals[static_cast<std::size_t>(i)];
        const bool value = a[static_cast<std::size_t>(std::abs(lit) - 1)] != 0;
        if (value == (lit > 0)) {
            return true;
        }
    }
    return false;
}

bool Cnf3Formula::satisfied_by(const Assignment& a) const {
    return !first_unsatisfied(a).has_value();
}

std::optional<std::size_t> Cnf3Formula::first_unsatisfied(const Assignment& a) const {
    if (a.size() != static_cast<std::size_t>(n_)) {
        throw InvalidDimension("Cnf3Formula: assignment length differs from the variable count");
    }
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        if (!satisfied_by(clauses_[i], a)) {
            return i;
        }
    }
    return std::nullopt;
}

Cnf3Formula parse_dimacs(std::istream& in) {
    int n = -1;
    long long declared = -1;
    std::vector<Clause> clauses;
    Clause current;
    std::string line;
    std::size_t line_no = 0;
    bool done = false;
    while (!done && std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) {
            continue;
        }
        if (tok == "c") {
            continue;
        }
        if (tok == "%") {
            break;
        }
        if (tok == "p") {
            std::string fmt;
            if (n >= 0 || !(ls >> fmt >> n >> declared) || fmt != "cnf" || n < 1 || declared < 0) {
                throw ParseError("DIMACS line " + std::to_string(line_no) + ": bad problem line");
            }
            continue;
        }
        if (n < 0) {
            throw ParseError("DIMACS line " + std::to_string(line_no) + ": clause before the problem line");
        }
        std::istringstream cs(line);
        while (cs >> tok) {
            if (tok == "%") {
                done = true;
                break;
            }
            char* end = nullptr;
            const long v = std::strtol(tok.c_str(), &end, 10);
            if (end == tok.c_str() || *end != '\0') {
                throw ParseError("DIMACS line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
            }
            if (v == 0) {
                if (current.size == 0) {
                    throw ParseError("DIMACS line " + std::to_string(line_no) + ": empty clause");
                }
                clauses.push_back(current);
                current = Clause{};
                continue;
            }
            if (std::labs(v) > n) {
                throw ParseError("DIMACS line " + std::to_string(line_no) + ": literal " + tok +
                                 " outside [1, " + std::to_string(n) + "]");
            }
            if (current.size == 3) {
                throw ParseError("DIMACS line " + std::to_string(line_no) + ": clause has more than 3 literals");
            }
            current.literals[static_cast<std::size_t>(current.size++)] = static_cast<int>(v);
        }
    }
    if (n < 0) {
        throw ParseError("DIMACS: missing problem line");
    }
    if (current.size > 0) {
        clauses.push_back(current);
    }
    if (static_cast<long long>(clauses.size()) != declared) {
        throw ParseError("DIMACS: header declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(clauses.size()));
    }
    return Cnf3Formula(n, std::move(clauses));
}

Cnf3Formula load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open CNF file " + path);
    }
    return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const Cnf3Formula& formula) {
    out << "p cnf " << formula.variables() << ' ' << formula.clauses().size() << '\n';
    for (const Clause& c : formula.clauses()) {
        for (int i = 0; i < c.size; ++i) {
            out << c.literals[static_cast<std::size_t>(i)] << ' ';
        }
        out << "0\n";
    }
}

PlantedInstance planted_3sat(int n, double clause_ratio, SeededRng& rng) {
    if (n < 3) {
        throw ParameterError("planted_3sat: need at least 3 variables");
    }
    if (!(clause_ratio > 0.0)) {
        throw ParameterError("planted_3sat: clause ratio must be positive");
    }
    Assignment solution(static_cast<std::size_t>(n));
    for (auto& v : solution) {
        v = static_cast<std::uint8_t>(rng.below(2));
    }
    const auto m = static_cast<std::size_t>(std::llround(clause_ratio * n));
    std::vector<Clause> clauses;
    clauses.reserve(m);
    const auto nu = static_cast<std::uint64_t>(n);
    while (clauses.size() < m) {
        const int a = static_cast<int>(rng.below(nu));
        int b = static_cast<int>(rng.below(nu - 1));
        b += b >= a ? 1 : 0;
        int c = static_cast<int>(rng.below(nu - 2));
        const int lo = std::min(a, b);
        const int hi = std::max(a, b);
        c += c >= lo ? 1 : 0;
        c += c >= hi ? 1 : 0;
        Clause cl;
        cl.size = 3;
        const int vars[3] = {a, b, c};
        bool satisfied = false;
        for (std::size_t i = 0; i < 3; ++i) {
            const bool positive = rng.below(2) == 1;
            cl.literals[i] = positive ? vars[i] + 1 : -(vars[i] + 1);
            satisfied = satisfied || ((solution[static_cast<std::size_t>(vars[i])] != 0) == positive);
        }
        if (satisfied) {
            clauses.push_back(cl);
        }
    }
    return PlantedInstance{Cnf3Formula(n, std::move(clauses)), std::move(solution)};
}

} // namespace qsearch
