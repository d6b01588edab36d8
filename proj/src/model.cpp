#include "model.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace lve {

namespace {

// Whitespace tokenizer with '#'-to-end-of-line comments and token
// positions for error messages.
class Tokenizer {
public:
    explicit Tokenizer(std::istream& in) : in_(in) {}

    bool next(std::string& tok) {
        while (true) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) return false;
                ++lineno_;
                pos_ = 0;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(line_[pos_]))) {
                ++pos_;
                continue;
            }
            if (line_[pos_] == '#') {
                pos_ = line_.size();
                continue;
            }
            std::size_t start = pos_;
            while (pos_ < line_.size() &&
                   !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
                   line_[pos_] != '#')
                ++pos_;
            tok = line_.substr(start, pos_ - start);
            return true;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ModelError("parse error at line " + std::to_string(lineno_) +
                         ": " + msg);
    }

    long expect_int(const std::string& what) {
        std::string tok;
        if (!next(tok)) fail("unexpected end of input, expected " + what);
        try {
            std::size_t used = 0;
            long v = std::stol(tok, &used);
            if (used != tok.size()) fail("bad " + what + " '" + tok + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad " + what + " '" + tok + "'");
        }
    }

    double expect_real(const std::string& what) {
        std::string tok;
        if (!next(tok)) fail("unexpected end of input, expected " + what);
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) fail("bad " + what + " '" + tok + "'");
            return v;
        } catch (const std::logic_error&) {
            fail("bad " + what + " '" + tok + "'");
        }
    }

private:
    std::istream& in_;
    std::string line_;
    std::size_t pos_ = 0;
    int lineno_ = 0;
};

}  // namespace

void Model::validate() const {
    int n = num_vars();
    std::vector<bool> mentioned(n, false);
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        const Factor& f = factors[fi];
        for (int p = 0; p < f.arity(); ++p) {
            VariableId v = f.scope()[p];
            if (v < 0 || v >= n)
                throw ModelError("factor " + std::to_string(fi) +
                                 ": variable index out of range");
            if (f.shape()[p] != cardinalities[v])
                throw ModelError("factor " + std::to_string(fi) +
                                 ": shape disagrees with cardinality of variable " +
                                 std::to_string(v));
            mentioned[v] = true;
        }
    }
    for (int v = 0; v < n; ++v)
        if (!mentioned[v])
            throw ModelError("variable " + std::to_string(v) +
                             " is mentioned by no factor");
}

std::vector<bool> Model::active_vars() const {
    std::vector<bool> active(num_vars(), false);
    for (const Factor& f : factors)
        for (VariableId v : f.scope()) active[v] = true;
    return active;
}

Model load_model(std::istream& in) {
    Tokenizer tok(in);
    std::string head;
    if (!tok.next(head)) tok.fail("empty input");
    if (head != "MARKOV") tok.fail("expected MARKOV header, got '" + head + "'");

    long n = tok.expect_int("variable count");
    if (n <= 0) tok.fail("variable count must be positive");
    Model m;
    m.cardinalities.resize(n);
    for (long i = 0; i < n; ++i) {
        long c = tok.expect_int("cardinality");
        if (c <= 0) tok.fail("cardinality must be positive");
        m.cardinalities[i] = static_cast<int>(c);
    }

    long fcount = tok.expect_int("factor count");
    if (fcount <= 0) tok.fail("model must contain at least one factor");
    std::vector<std::vector<VariableId>> scopes(fcount);
    for (long fi = 0; fi < fcount; ++fi) {
        long arity = tok.expect_int("scope arity");
        if (arity < 0) tok.fail("negative arity");
        scopes[fi].resize(arity);
        for (long p = 0; p < arity; ++p) {
            long v = tok.expect_int("variable index");
            if (v < 0 || v >= n) tok.fail("variable index out of range in factor " +
                                          std::to_string(fi));
            scopes[fi][p] = static_cast<VariableId>(v);
        }
    }
    for (long fi = 0; fi < fcount; ++fi) {
        long count = tok.expect_int("table length");
        std::size_t expected = 1;
        std::vector<int> shape(scopes[fi].size());
        for (std::size_t p = 0; p < scopes[fi].size(); ++p) {
            shape[p] = m.cardinalities[scopes[fi][p]];
            expected *= static_cast<std::size_t>(shape[p]);
        }
        if (static_cast<std::size_t>(count) != expected)
            tok.fail("table length of factor " + std::to_string(fi) +
                     " does not match its shape");
        std::vector<double> values(count);
        for (long i = 0; i < count; ++i) {
            double v = tok.expect_real("table value");
            if (v < 0.0) tok.fail("negative value in factor " + std::to_string(fi));
            values[i] = v;
        }
        try {
            m.factors.emplace_back(scopes[fi], std::move(shape), std::move(values));
        } catch (const FactorError& e) {
            throw ModelError("factor " + std::to_string(fi) + ": " + e.what());
        }
    }
    m.validate();
    return m;
}

void save_model(const Model& m, std::ostream& out) {
    out << "MARKOV\n" << m.num_vars() << "\n";
    for (int i = 0; i < m.num_vars(); ++i)
        out << m.cardinalities[i] << (i + 1 == m.num_vars() ? "\n" : " ");
    out << m.factors.size() << "\n";
    for (const Factor& f : m.factors) {
        out << f.arity();
        for (VariableId v : f.scope()) out << ' ' << v;
        out << "\n";
    }
    out.precision(17);
    for (const Factor& f : m.factors) {
        out << f.size() << "\n";
        for (std::size_t i = 0; i < f.size(); ++i)
            out << f.values()[i] << (i + 1 == f.size() ? "\n" : " ");
    }
}

Evidence load_evidence(std::istream& in) {
    Tokenizer tok(in);
    long count = tok.expect_int("evidence count");
    Evidence e;
    for (long i = 0; i < count; ++i) {
        long var = tok.expect_int("evidence variable");
        long val = tok.expect_int("evidence value");
        if (e.count(static_cast<VariableId>(var)))
            tok.fail("duplicate evidence variable " + std::to_string(var));
        e[static_cast<VariableId>(var)] = static_cast<int>(val);
    }
    return e;
}

QuerySet load_queries(std::istream& in) {
    Tokenizer tok(in);
    QuerySet q;
    std::string t;
    while (tok.next(t)) {
        try {
            q.push_back(static_cast<VariableId>(std::stol(t)));
        } catch (const std::logic_error&) {
            tok.fail("bad variable index '" + t + "'");
        }
    }
    return q;
}

Model apply_evidence(const Model& m, const Evidence& e, const QuerySet& queries) {
    for (const auto& [v, val] : e) {
        if (v < 0 || v >= m.num_vars())
            throw ModelError("evidence variable " + std::to_string(v) +
                             " does not exist");
        if (val < 0 || val >= m.cardinalities[v])
            throw ModelError("evidence value out of range for variable " +
                             std::to_string(v));
        if (std::find(queries.begin(), queries.end(), v) != queries.end())
            throw ModelError("evidence on query variable " + std::to_string(v));
    }
    Model out;
    out.cardinalities = m.cardinalities;
    for (const Factor& f : m.factors) {
        Factor g = f;
        for (const auto& [v, val] : e)
            if (g.contains(v)) g = reduce(g, v, val);
        out.factors.push_back(std::move(g));
    }
    return out;
}

}  // namespace lve
