#include "spectra/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace spectra {

namespace {

enum class Tok {
    Ident,
    True,
    False,
    Exists,
    Forall,
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    End,
};

struct Token {
    Tok type;
    std::string text;
    int line, column;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        current_.line = line_;
        current_.column = col_;
        if (pos_ >= src_.size()) {
            current_.type = Tok::End;
            current_.text = "<end of input>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                take();
            current_.text = src_.substr(start, pos_ - start);
            if (current_.text == "true") current_.type = Tok::True;
            else if (current_.text == "false") current_.type = Tok::False;
            else if (current_.text == "exists") current_.type = Tok::Exists;
            else if (current_.text == "forall") current_.type = Tok::Forall;
            else current_.type = Tok::Ident;
            return;
        }
        switch (c) {
            case '(': take(); set(Tok::LParen, "("); return;
            case ')': take(); set(Tok::RParen, ")"); return;
            case ',': take(); set(Tok::Comma, ","); return;
            case '.': take(); set(Tok::Dot, "."); return;
            case '=': take(); set(Tok::Eq, "="); return;
            case '~': take(); set(Tok::Tilde, "~"); return;
            case '&': take(); set(Tok::Amp, "&"); return;
            case '|': take(); set(Tok::Pipe, "|"); return;
            case '-':
                take();
                if (pos_ < src_.size() && src_[pos_] == '>') {
                    take();
                    set(Tok::Arrow, "->");
                    return;
                }
                throw ParseError("stray '-'", current_.line, current_.column);
            case '<':
                take();
                if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
                    take();
                    take();
                    set(Tok::DArrow, "<->");
                    return;
                }
                throw ParseError("stray '<'", current_.line, current_.column);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
        }
    }

    void set(Tok t, const char* s) {
        current_.type = t;
        current_.text = s;
    }

    void take() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') take();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                break;
            }
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_;
};

class Parser {
public:
    Parser(const std::string& text, const Vocabulary& vocab) : lex_(text), vocab_(vocab) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_iff();
        const Token& t = lex_.peek();
        if (t.type != Tok::End)
            throw ParseError("unexpected '" + t.text + "' after formula", t.line, t.column);
        return f;
    }

private:
    FormulaPtr parse_iff() {
        FormulaPtr f = parse_implies();
        while (lex_.peek().type == Tok::DArrow) {
            lex_.next();
            f = mk_iff(f, parse_implies());
        }
        return f;
    }

    FormulaPtr parse_implies() {
        FormulaPtr f = parse_or();
        if (lex_.peek().type == Tok::Arrow) {
            lex_.next();
            return mk_implies(f, parse_implies());
        }
        return f;
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (lex_.peek().type == Tok::Pipe) {
            lex_.next();
            f = mk_or(f, parse_and());
        }
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_unary();
        while (lex_.peek().type == Tok::Amp) {
            lex_.next();
            f = mk_and(f, parse_unary());
        }
        return f;
    }

    FormulaPtr parse_unary() {
        const Token& t = lex_.peek();
        switch (t.type) {
            case Tok::Tilde:
                lex_.next();
                return mk_not(parse_unary());
            case Tok::Exists:
            case Tok::Forall: {
                Token q = lex_.next();
                Token var = expect(Tok::Ident, "quantified variable");
                if (vocab_.contains(var.text))
                    throw ParseError("relation symbol '" + var.text + "' used as variable",
                                     var.line, var.column);
                expect(Tok::Dot, "'.'");
                FormulaPtr body = parse_unary();
                return q.type == Tok::Exists ? mk_exists(var.text, body)
                                             : mk_forall(var.text, body);
            }
            case Tok::LParen: {
                lex_.next();
                FormulaPtr f = parse_iff();
                expect(Tok::RParen, "')'");
                return f;
            }
            default:
                return parse_atom();
        }
    }

    FormulaPtr parse_atom() {
        const Token& t = lex_.peek();
        if (t.type == Tok::True) {
            lex_.next();
            return mk_true();
        }
        if (t.type == Tok::False) {
            lex_.next();
            return mk_false();
        }
        Token name = expect(Tok::Ident, "atom");
        if (lex_.peek().type == Tok::LParen) {
            if (!vocab_.contains(name.text))
                throw ParseError("unknown relation symbol '" + name.text + "'", name.line,
                                 name.column);
            lex_.next();
            Token x = expect(Tok::Ident, "variable");
            check_var(x);
            expect(Tok::Comma, "','");  // arity is always 2
            Token y = expect(Tok::Ident, "variable");
            check_var(y);
            expect(Tok::RParen, "')'");
            return mk_atom(name.text, x.text, y.text);
        }
        if (lex_.peek().type == Tok::Eq) {
            check_var(name);
            lex_.next();
            Token y = expect(Tok::Ident, "variable");
            check_var(y);
            return mk_eq(name.text, y.text);
        }
        const Token& bad = lex_.peek();
        throw ParseError("expected '(' or '=' after '" + name.text + "'", bad.line, bad.column);
    }

    void check_var(const Token& t) {
        if (vocab_.contains(t.text))
            throw ParseError("relation symbol '" + t.text + "' used as variable", t.line,
                             t.column);
    }

    Token expect(Tok type, const std::string& what) {
        const Token& t = lex_.peek();
        if (t.type != type)
            throw ParseError("expected " + what + ", found '" + t.text + "'", t.line, t.column);
        return lex_.next();
    }

    Lexer lex_;
    const Vocabulary& vocab_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab) {
    return Parser(text, vocab).parse();
}

FoDocument parse_fo_document(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream header(line.substr(start));
        std::string keyword;
        header >> keyword;
        if (keyword != "vocab")
            throw ParseError("expected 'vocab' header line", lineno, static_cast<int>(start) + 1);
        std::vector<std::string> symbols;
        std::string sym;
        while (header >> sym) {
            if (sym[0] == '#') break;
            symbols.push_back(sym);
        }
        std::ostringstream rest;
        rest << in.rdbuf();
        FoDocument doc;
        doc.vocab = Vocabulary(symbols);
        doc.formula = parse_formula(rest.str(), doc.vocab);
        return doc;
    }
    throw ParseError("empty document: no 'vocab' header", lineno, 1);
}

FoDocument load_fo_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fo_document(buf.str());
}

std::string render_fo_document(const Vocabulary& vocab, const FormulaPtr& f) {
    std::string out = "vocab";
    for (const auto& s : vocab.symbols()) {
        out += ' ';
        out += s;
    }
    out += '\n';
    out += print_formula(f);
    out += '\n';
    return out;
}

}  // namespace spectra
