#include "cslearn/bif.hpp"

#include <cmath>
#include <map>

#include "cslearn/errors.hpp"

namespace cslearn {

BayesNet::BayesNet(Dag graph, std::vector<Variable> variables, std::vector<Cpt> cpts)
    : graph_(std::move(graph)), vars_(std::move(variables)), cpts_(std::move(cpts)) {
    const int n = graph_.node_count();
    if (int(vars_.size()) != n || int(cpts_.size()) != n)
        fail(Errc::InvalidArgument, "BayesNet: variable/cpt count mismatch");
    for (int v = 0; v < n; ++v) {
        if (vars_[v].name != graph_.node_names()[v])
            fail(Errc::InvalidArgument, "BayesNet: variable order differs from graph order");
        if (vars_[v].cardinality() < 2)
            fail(Errc::Semantic, "BayesNet: variable '" + vars_[v].name + "' needs at least two labels");
        if (cpts_[v].parents != graph_.parents(v))
            fail(Errc::InvalidArgument, "BayesNet: cpt parents disagree with graph for '" + vars_[v].name + "'");
        std::size_t q = 1;
        for (int p : cpts_[v].parents) q *= std::size_t(vars_[p].cardinality());
        const int r = vars_[v].cardinality();
        if (cpts_[v].probs.size() != q * std::size_t(r))
            fail(Errc::Semantic, "BayesNet: cpt for '" + vars_[v].name + "' has wrong size");
        for (std::size_t row = 0; row < q; ++row) {
            double sum = 0.0;
            for (int k = 0; k < r; ++k) {
                double p = cpts_[v].probs[row * r + k];
                if (p < 0.0 || !(p <= 1.0))
                    fail(Errc::Semantic, "BayesNet: probability out of [0,1] for '" + vars_[v].name + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                fail(Errc::Semantic, "BayesNet: cpt row does not sum to one for '" + vars_[v].name + "'");
        }
    }
}

int BayesNet::parent_config(int node, const std::vector<std::uint8_t>& values) const {
    const Cpt& c = cpts_[node];
    int cfg = 0;
    for (int p : c.parents) cfg = cfg * vars_[p].cardinality() + values[p];
    return cfg;
}

std::vector<Edge> edges_of(const BayesNet& net) { return net.graph().edges(); }

namespace {

struct Token {
    enum Kind { Word, Punct, End } kind = End;
    std::string text;
    int line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        if (is_word_char(c)) {
            t.kind = Token::Word;
            while (pos_ < text_.size() && is_word_char(text_[pos_])) t.text += take();
            return t;
        }
        if (c == '"') {
            // Quoted strings only appear in property values; return verbatim.
            t.kind = Token::Word;
            take();
            while (pos_ < text_.size() && text_[pos_] != '"') t.text += take();
            if (pos_ >= text_.size()) err(t.line, t.col, "unterminated string");
            take();
            return t;
        }
        t.kind = Token::Punct;
        t.text = std::string(1, take());
        return t;
    }

    [[noreturn]] static void err(int line, int col, const std::string& msg) {
        fail(Errc::Syntax, "bif: line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
    }

private:
    static bool is_word_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-' || c == '.' || c == '%' || c == '+';
    }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') take();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class BifParser {
public:
    explicit BifParser(std::string_view text) : lex_(text) { advance(); }

    BayesNet parse() {
        expect_word("network");
        if (cur_.kind != Token::Word) Lexer::err(cur_.line, cur_.col, "expected network name");
        advance();
        skip_block();

        while (cur_.kind != Token::End) {
            if (cur_.kind != Token::Word)
                Lexer::err(cur_.line, cur_.col, "expected 'variable' or 'probability'");
            if (cur_.text == "variable") {
                advance();
                parse_variable();
            } else if (cur_.text == "probability") {
                advance();
                parse_probability();
            } else {
                Lexer::err(cur_.line, cur_.col, "unexpected token '" + cur_.text + "'");
            }
        }
        return assemble();
    }

private:
    void advance() { cur_ = lex_.next(); }

    void expect_punct(const char* p) {
        if (cur_.kind != Token::Punct || cur_.text != p)
            Lexer::err(cur_.line, cur_.col, std::string("expected '") + p + "', got '" + cur_.text + "'");
        advance();
    }

    void expect_word(const char* w) {
        if (cur_.kind != Token::Word || cur_.text != w)
            Lexer::err(cur_.line, cur_.col, std::string("expected '") + w + "', got '" + cur_.text + "'");
        advance();
    }

    std::string take_word(const char* what) {
        if (cur_.kind != Token::Word) Lexer::err(cur_.line, cur_.col, std::string("expected ") + what);
        std::string w = cur_.text;
        advance();
        return w;
    }

    double take_number() {
        int line = cur_.line, col = cur_.col;
        std::string w = take_word("number");
        // Allow a leading 'e'/'E' exponent continuation like "1e-3" which the
        // lexer already grouped into one word.
        try {
            std::size_t used = 0;
            double v = std::stod(w, &used);
            if (used != w.size()) throw std::invalid_argument(w);
            return v;
        } catch (const std::exception&) {
            Lexer::err(line, col, "expected number, got '" + w + "'");
        }
    }

    void skip_block() {
        expect_punct("{");
        int depth = 1;
        while (depth > 0) {
            if (cur_.kind == Token::End) Lexer::err(cur_.line, cur_.col, "unterminated block");
            if (cur_.kind == Token::Punct && cur_.text == "{") ++depth;
            if (cur_.kind == Token::Punct && cur_.text == "}") --depth;
            advance();
        }
    }

    void skip_property() {
        while (!(cur_.kind == Token::Punct && cur_.text == ";")) {
            if (cur_.kind == Token::End) Lexer::err(cur_.line, cur_.col, "unterminated property");
            advance();
        }
        advance();
    }

    void parse_variable() {
        int line = cur_.line, col = cur_.col;
        std::string name = take_word("variable name");
        if (index_.count(name)) Lexer::err(line, col, "duplicate variable '" + name + "'");
        expect_punct("{");
        Variable var;
        var.name = name;
        int declared = -1;
        while (!(cur_.kind == Token::Punct && cur_.text == "}")) {
            if (cur_.kind == Token::Word && cur_.text == "property") {
                skip_property();
                continue;
            }
            expect_word("type");
            int tline = cur_.line, tcol = cur_.col;
            std::string type = take_word("type name");
            if (type != "discrete") Lexer::err(tline, tcol, "unsupported variable type '" + type + "'");
            expect_punct("[");
            declared = int(take_number());
            expect_punct("]");
            expect_punct("{");
            while (true) {
                var.labels.push_back(take_word("label"));
                if (cur_.kind == Token::Punct && cur_.text == ",") {
                    advance();
                    continue;
                }
                break;
            }
            expect_punct("}");
            expect_punct(";");
        }
        expect_punct("}");
        if (declared != int(var.labels.size()))
            fail(Errc::Semantic, "bif: variable '" + name + "' declares " + std::to_string(declared) +
                                     " values but lists " + std::to_string(var.labels.size()) + " labels");
        if (var.cardinality() < 2)
            fail(Errc::Semantic, "bif: variable '" + name + "' needs at least two labels");
        index_[name] = int(vars_.size());
        vars_.push_back(std::move(var));
    }

    int resolve(const std::string& name, int line, int col) {
        auto it = index_.find(name);
        if (it == index_.end())
            fail(Errc::UnknownVariable, "bif: line " + std::to_string(line) + ": unknown variable '" + name + "'");
        return it->second;
    }

    void parse_probability() {
        expect_punct("(");
        int line = cur_.line, col = cur_.col;
        int child = resolve(take_word("variable name"), line, col);
        std::vector<int> file_parents;
        if (cur_.kind == Token::Punct && cur_.text == "|") {
            advance();
            while (true) {
                int pl = cur_.line, pc = cur_.col;
                file_parents.push_back(resolve(take_word("parent name"), pl, pc));
                if (cur_.kind == Token::Punct && cur_.text == ",") {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        if (blocks_.count(child))
            fail(Errc::Semantic, "bif: duplicate probability block for '" + vars_[child].name + "'");

        const int r = vars_[child].cardinality();
        std::size_t q = 1;
        for (int p : file_parents) q *= std::size_t(vars_[p].cardinality());

        std::vector<double> rows(q * std::size_t(r), -1.0);
        std::vector<bool> seen(q, false);

        expect_punct("{");
        while (!(cur_.kind == Token::Punct && cur_.text == "}")) {
            if (cur_.kind == Token::Word && cur_.text == "property") {
                skip_property();
                continue;
            }
            if (cur_.kind == Token::Word && cur_.text == "table") {
                advance();
                // Flat table: parent configurations iterate with the first
                // listed parent most significant, child value fastest.
                for (std::size_t cfg = 0; cfg < q; ++cfg) {
                    for (int k = 0; k < r; ++k) {
                        if (cfg + k && !(cur_.kind == Token::Punct && cur_.text == ","))
                            Lexer::err(cur_.line, cur_.col, "expected ','");
                        if (cfg + k) advance();
                        rows[cfg * r + k] = take_number();
                    }
                    seen[cfg] = true;
                }
                expect_punct(";");
                continue;
            }
            // Per-configuration row: (label, label, ...) p0, p1, ...;
            int rl = cur_.line, rc = cur_.col;
            expect_punct("(");
            std::size_t cfg = 0;
            for (std::size_t i = 0; i < file_parents.size(); ++i) {
                if (i) expect_punct(",");
                int ll = cur_.line, lc = cur_.col;
                std::string label = take_word("label");
                const Variable& pv = vars_[file_parents[i]];
                int idx = -1;
                for (int k = 0; k < pv.cardinality(); ++k)
                    if (pv.labels[k] == label) idx = k;
                if (idx < 0)
                    fail(Errc::Semantic, "bif: line " + std::to_string(ll) + ": '" + label +
                                             "' is not a value of '" + pv.name + "'");
                cfg = cfg * std::size_t(pv.cardinality()) + std::size_t(idx);
            }
            expect_punct(")");
            if (file_parents.empty())
                Lexer::err(rl, rc, "configuration row in a table without parents");
            if (seen[cfg])
                fail(Errc::Semantic, "bif: line " + std::to_string(rl) + ": duplicate configuration row");
            seen[cfg] = true;
            for (int k = 0; k < r; ++k) {
                if (k) expect_punct(",");
                rows[cfg * r + k] = take_number();
            }
            expect_punct(";");
        }
        expect_punct("}");

        for (std::size_t cfg = 0; cfg < q; ++cfg)
            if (!seen[cfg])
                fail(Errc::Semantic, "bif: probability block for '" + vars_[child].name +
                                         "' leaves a parent configuration unspecified");
        for (std::size_t cfg = 0; cfg < q; ++cfg) {
            double sum = 0.0;
            for (int k = 0; k < r; ++k) {
                double p = rows[cfg * r + k];
                if (p < 0.0)
                    fail(Errc::Semantic, "bif: negative probability for '" + vars_[child].name + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-6)
                fail(Errc::Semantic, "bif: probability row for '" + vars_[child].name +
                                         "' sums to " + std::to_string(sum));
            for (int k = 0; k < r; ++k) rows[cfg * r + k] /= sum;
        }

        blocks_[child] = {file_parents, std::move(rows)};
    }

    BayesNet assemble() {
        const int n = int(vars_.size());
        if (n == 0) fail(Errc::Semantic, "bif: no variables declared");
        std::vector<std::string> names;
        for (const Variable& v : vars_) names.push_back(v.name);
        std::vector<Edge> edge_list;
        for (const auto& [child, blk] : blocks_)
            for (int p : blk.first) edge_list.push_back({p, child});
        Dag graph = Dag::from_edges(names, edge_list);

        std::vector<Cpt> cpts(n);
        for (int v = 0; v < n; ++v) {
            auto it = blocks_.find(v);
            if (it == blocks_.end())
                fail(Errc::Semantic, "bif: variable '" + vars_[v].name + "' has no probability block");
            const std::vector<int>& fp = it->second.first;
            const std::vector<double>& rows = it->second.second;

            Cpt cpt;
            cpt.parents = graph.parents(v);
            const int r = vars_[v].cardinality();
            std::size_t q = rows.size() / std::size_t(r);
            cpt.probs.assign(rows.size(), 0.0);

            // Remap file parent order to canonical ascending order.
            std::vector<std::size_t> file_weight(fp.size(), 1), canon_weight(fp.size(), 1);
            for (int i = int(fp.size()) - 2; i >= 0; --i)
                file_weight[i] = file_weight[i + 1] * std::size_t(vars_[fp[i + 1]].cardinality());
            for (int i = int(cpt.parents.size()) - 2; i >= 0; --i)
                canon_weight[i] = canon_weight[i + 1] * std::size_t(vars_[cpt.parents[i + 1]].cardinality());
            std::vector<int> file_to_canon(fp.size());
            for (std::size_t i = 0; i < fp.size(); ++i) {
                int slot = -1;
                for (std::size_t j = 0; j < cpt.parents.size(); ++j)
                    if (cpt.parents[j] == fp[i]) slot = int(j);
                file_to_canon[i] = slot;
            }
            for (std::size_t cfg = 0; cfg < q; ++cfg) {
                std::size_t canon_cfg = 0;
                std::size_t rest = cfg;
                for (std::size_t i = 0; i < fp.size(); ++i) {
                    std::size_t val = rest / file_weight[i];
                    rest %= file_weight[i];
                    canon_cfg += val * canon_weight[std::size_t(file_to_canon[i])];
                }
                for (int k = 0; k < r; ++k) cpt.probs[canon_cfg * r + k] = rows[cfg * r + k];
            }
            cpts[v] = std::move(cpt);
        }
        return BayesNet(std::move(graph), std::move(vars_), std::move(cpts));
    }

    Lexer lex_;
    Token cur_;
    std::vector<Variable> vars_;
    std::map<std::string, int> index_;
    std::map<int, std::pair<std::vector<int>, std::vector<double>>> blocks_;
};

} // namespace

BayesNet parse_bif(std::string_view text) { return BifParser(text).parse(); }

BayesNet parse_bif_file(const std::string& path) { return parse_bif(read_text_file(path)); }

} // namespace cslearn
