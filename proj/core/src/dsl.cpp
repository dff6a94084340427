#include "mdag/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace mdag {

ParseError::ParseError(int line, int column, std::string message, std::string token)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)) {}

namespace {

enum class Tok {
    ident,
    string,
    lbrace,
    rbrace,
    lbracket,
    rbracket,
    arrow,
    semicolon,
    comma,
    colon,
    tilde,
    plus,
    end
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::end;
            return t;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                advance();
            }
            t.kind = Tok::ident;
            t.text = std::string(text_.substr(start, pos_ - start));
            return t;
        }
        if (c == '"') {
            advance();
            std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') advance();
            if (pos_ >= text_.size() || text_[pos_] != '"') {
                throw ParseError(t.line, t.column, "unterminated string literal", "\"");
            }
            t.kind = Tok::string;
            t.text = std::string(text_.substr(start, pos_ - start));
            advance();  // closing quote
            return t;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            t.kind = Tok::arrow;
            t.text = "->";
            return t;
        }
        auto single = [&](Tok kind) {
            t.kind = kind;
            t.text = std::string(1, c);
            advance();
            return t;
        };
        switch (c) {
            case '{': return single(Tok::lbrace);
            case '}': return single(Tok::rbrace);
            case '[': return single(Tok::lbracket);
            case ']': return single(Tok::rbracket);
            case ';': return single(Tok::semicolon);
            case ',': return single(Tok::comma);
            case ':': return single(Tok::colon);
            case '~': return single(Tok::tilde);
            case '+': return single(Tok::plus);
            default:
                throw ParseError(t.line, t.column,
                                 "unexpected character '" + std::string(1, c) + "'",
                                 std::string(1, c));
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

struct DeclInfo {
    VariableStatus status;
    std::optional<VariableRole> role;
    int line;
    int column;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    MDag run() {
        expect_keyword("dag");
        Token name = expect(Tok::string, "document name string");
        expect(Tok::lbrace, "'{'");
        while (cur_.kind != Tok::rbrace) {
            if (cur_.kind == Tok::end) {
                fail("unexpected end of input; expected '}'");
            }
            statement();
        }
        Token close = cur_;
        shift();
        if (cur_.kind != Tok::end) {
            fail("trailing input after '}'");
        }
        if (!analysis_) {
            throw ParseError(close.line, close.column,
                             "document has no 'target:' analysis declaration", close.text);
        }

        std::vector<VariableDecl> vars;
        for (const auto& [nm, info] : decls_) {
            vars.push_back({nm, info.status, info.role});
        }
        try {
            return MDag::build(name.text, std::move(vars), edges_, *analysis_);
        } catch (const GraphError& e) {
            // Position-attributable problems were caught during parsing;
            // anything left is reported against the document head.
            throw ParseError(1, 1, e.what(), "dag");
        }
    }

private:
    void shift() { cur_ = lexer_.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur_.line, cur_.column, msg, cur_.text);
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) {
            fail("expected " + what);
        }
        Token t = cur_;
        shift();
        return t;
    }

    void expect_keyword(const std::string& kw) {
        if (cur_.kind != Tok::ident || cur_.text != kw) {
            fail("expected '" + kw + "'");
        }
        shift();
    }

    bool at_keyword(const std::string& kw) const {
        return cur_.kind == Tok::ident && cur_.text == kw;
    }

    void statement() {
        if (at_keyword("node")) {
            node_statement();
        } else if (at_keyword("target")) {
            analysis_statement();
        } else if (cur_.kind == Tok::ident) {
            edge_statement();
        } else {
            fail("expected a node, edge, or target statement");
        }
    }

    void node_statement() {
        shift();  // 'node'
        Token name = expect(Tok::ident, "variable name");
        if (decls_.count(name.text)) {
            throw ParseError(name.line, name.column, "duplicate variable '" + name.text + "'",
                             name.text);
        }
        expect(Tok::lbrace, "'{'");
        expect_keyword("status");
        expect(Tok::colon, "':'");
        Token status = expect(Tok::ident, "status (complete|incomplete|unmeasured)");
        DeclInfo info{VariableStatus::complete, std::nullopt, name.line, name.column};
        if (status.text == "complete") {
            info.status = VariableStatus::complete;
        } else if (status.text == "incomplete") {
            info.status = VariableStatus::incomplete;
        } else if (status.text == "unmeasured") {
            info.status = VariableStatus::unmeasured;
        } else {
            throw ParseError(status.line, status.column,
                             "unknown status '" + status.text + "'", status.text);
        }
        if (cur_.kind == Tok::comma) {
            shift();
            expect_keyword("role");
            expect(Tok::colon, "':'");
            Token role = expect(Tok::ident, "role");
            if (role.text == "exposure") {
                info.role = VariableRole::exposure;
            } else if (role.text == "outcome") {
                info.role = VariableRole::outcome;
            } else if (role.text == "covariate") {
                info.role = VariableRole::covariate;
            } else if (role.text == "auxiliary") {
                info.role = VariableRole::auxiliary;
            } else if (role.text == "other") {
                info.role = VariableRole::other;
            } else {
                throw ParseError(role.line, role.column, "unknown role '" + role.text + "'",
                                 role.text);
            }
        }
        expect(Tok::rbrace, "'}'");
        decls_.emplace(name.text, info);
    }

    // Returns the endpoint in canonical spelling ("X" or "R[X]").
    std::string endpoint() {
        Token head = expect(Tok::ident, "variable or R[...] endpoint");
        bool indicator = false;
        std::string varname = head.text;
        if ((head.text == "R" || head.text == "M") && cur_.kind == Tok::lbracket) {
            shift();
            Token inner = expect(Tok::ident, "variable name inside " + head.text + "[...]");
            expect(Tok::rbracket, "']'");
            indicator = true;
            varname = inner.text;
        }
        auto it = decls_.find(varname);
        if (it == decls_.end()) {
            throw ParseError(head.line, head.column, "unknown variable '" + varname + "'",
                             varname);
        }
        if (indicator && it->second.status != VariableStatus::incomplete) {
            throw ParseError(head.line, head.column,
                             "variable '" + varname + "' is " + to_string(it->second.status) +
                                 " and has no response indicator",
                             varname);
        }
        return indicator ? "R[" + varname + "]" : varname;
    }

    void edge_statement() {
        Token head = cur_;
        std::string from = endpoint();
        expect(Tok::arrow, "'->'");
        std::string to = endpoint();
        if (cur_.kind == Tok::semicolon) shift();

        if (from.rfind("R[", 0) == 0) {
            throw ParseError(head.line, head.column,
                             "edge out of response indicator '" + from + "': indicators are sinks",
                             from);
        }
        if (from == to) {
            throw ParseError(head.line, head.column, "self-edge on '" + from + "'", from);
        }
        for (const auto& e : edges_) {
            if (e.from == from && e.to == to) {
                throw ParseError(head.line, head.column, "duplicate edge " + from + " -> " + to,
                                 from);
            }
        }
        edges_.push_back({from, to});
        if (creates_cycle()) {
            throw ParseError(head.line, head.column,
                             "edge " + from + " -> " + to + " creates a cycle", from);
        }
    }

    bool creates_cycle() const {
        // Kahn over the edges seen so far; endpoints are canonical strings.
        std::map<std::string, std::vector<std::string>> out;
        std::map<std::string, int> indeg;
        for (const auto& e : edges_) {
            out[e.from].push_back(e.to);
            indeg.emplace(e.from, 0);
            ++indeg[e.to];
        }
        std::vector<std::string> ready;
        for (const auto& [n, d] : indeg) {
            if (d == 0) ready.push_back(n);
        }
        std::size_t removed = 0;
        while (!ready.empty()) {
            std::string v = ready.back();
            ready.pop_back();
            ++removed;
            for (const auto& w : out[v]) {
                if (--indeg[w] == 0) ready.push_back(w);
            }
        }
        return removed != indeg.size();
    }

    void analysis_statement() {
        Token head = cur_;
        shift();  // 'target'
        if (analysis_) {
            throw ParseError(head.line, head.column, "duplicate 'target:' declaration",
                             head.text);
        }
        expect(Tok::colon, "':'");
        AnalysisSpec spec;
        Token outcome = expect(Tok::ident, "outcome variable");
        spec.outcome = outcome.text;
        expect(Tok::tilde, "'~'");
        Token exposure = expect(Tok::ident, "exposure variable");
        spec.exposure = exposure.text;
        std::vector<Token> named{outcome, exposure};
        while (cur_.kind == Tok::plus) {
            shift();
            Token cov = expect(Tok::ident, "covariate name");
            spec.covariates.push_back(cov.text);
            named.push_back(cov);
        }
        if (cur_.kind == Tok::semicolon) {
            shift();
            expect_keyword("auxiliary");
            expect(Tok::colon, "':'");
            for (;;) {
                Token aux = expect(Tok::ident, "auxiliary name");
                spec.auxiliaries.push_back(aux.text);
                named.push_back(aux);
                if (cur_.kind != Tok::comma) break;
                shift();
            }
        }
        for (const auto& t : named) {
            auto it = decls_.find(t.text);
            if (it == decls_.end()) {
                throw ParseError(t.line, t.column, "unknown variable '" + t.text + "'", t.text);
            }
            if (it->second.status == VariableStatus::unmeasured) {
                throw ParseError(t.line, t.column,
                                 "unmeasured variable '" + t.text +
                                     "' cannot appear in the analysis or imputation model",
                                 t.text);
            }
        }
        // Role annotations must agree with the roles the target implies.
        auto implied = [&](const std::string& nm) {
            if (nm == spec.outcome) return VariableRole::outcome;
            if (nm == spec.exposure) return VariableRole::exposure;
            if (std::find(spec.covariates.begin(), spec.covariates.end(), nm) !=
                spec.covariates.end()) {
                return VariableRole::covariate;
            }
            if (std::find(spec.auxiliaries.begin(), spec.auxiliaries.end(), nm) !=
                spec.auxiliaries.end()) {
                return VariableRole::auxiliary;
            }
            return VariableRole::other;
        };
        for (const auto& [nm, info] : decls_) {
            if (info.role && *info.role != implied(nm)) {
                throw ParseError(head.line, head.column,
                                 "variable '" + nm + "' declared as " + to_string(*info.role) +
                                     " but the target makes it " + to_string(implied(nm)),
                                 nm);
            }
        }
        // Duplicate mentions across roles surface here rather than in build.
        std::vector<std::string> all{spec.outcome, spec.exposure};
        all.insert(all.end(), spec.covariates.begin(), spec.covariates.end());
        all.insert(all.end(), spec.auxiliaries.begin(), spec.auxiliaries.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
            throw ParseError(head.line, head.column,
                             "a variable appears more than once in the analysis declaration",
                             head.text);
        }
        analysis_ = spec;
    }

    Lexer lexer_;
    Token cur_;
    std::map<std::string, DeclInfo> decls_;
    std::vector<EdgeDecl> edges_;
    std::optional<AnalysisSpec> analysis_;
};

}  // namespace

MDag parse(std::string_view text) { return Parser(text).run(); }

std::string serialize(const MDag& g) {
    std::ostringstream out;
    out << "dag \"" << g.name() << "\" {\n";
    for (NodeId v : by_display_name(g, g.substantive())) {
        out << "  node " << g.display_name(v) << " { status: " << to_string(g.status(v));
        out << ", role: " << to_string(g.role(v)) << " }\n";
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (auto [from, to] : g.edges()) {
        edges.emplace_back(g.display_name(from), g.display_name(to));
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& [from, to] : edges) {
        out << "  " << from << " -> " << to << "\n";
    }
    const AnalysisSpec& a = g.analysis();
    out << "  target: " << a.outcome << " ~ " << a.exposure;
    std::vector<std::string> covs = a.covariates;
    std::sort(covs.begin(), covs.end());
    for (const auto& c : covs) out << " + " << c;
    if (!a.auxiliaries.empty()) {
        std::vector<std::string> aux = a.auxiliaries;
        std::sort(aux.begin(), aux.end());
        out << "; auxiliary: ";
        for (std::size_t i = 0; i < aux.size(); ++i) {
            if (i > 0) out << ", ";
            out << aux[i];
        }
    }
    out << "\n}\n";
    return out.str();
}

}  // namespace mdag
