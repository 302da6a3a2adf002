#include "beltrami/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <utility>

namespace beltrami {

const char* fn_name(FnTag tag) {
    switch (tag) {
        case FnTag::Exp: return "exp";
        case FnTag::Log: return "log";
        case FnTag::Sin: return "sin";
        case FnTag::Cos: return "cos";
        case FnTag::Tan: return "tan";
        case FnTag::Sqrt: return "sqrt";
        case FnTag::Arctan: return "arctan";
        case FnTag::Artanh: return "artanh";
    }
    return "?";
}

namespace {

std::optional<FnTag> fn_from_name(std::string_view s) {
    if (s == "exp") return FnTag::Exp;
    if (s == "log") return FnTag::Log;
    if (s == "sin") return FnTag::Sin;
    if (s == "cos") return FnTag::Cos;
    if (s == "tan") return FnTag::Tan;
    if (s == "sqrt") return FnTag::Sqrt;
    if (s == "arctan") return FnTag::Arctan;
    if (s == "artanh") return FnTag::Artanh;
    return std::nullopt;
}

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type;
    std::size_t pos;
    double number = 0.0;
    std::string_view text;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
        tok_.pos = at_;
        if (at_ == src_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        char c = src_[at_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && at_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[at_ + 1])))) {
            const char* begin = src_.data() + at_;
            const char* end = src_.data() + src_.size();
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc()) throw ParseError(at_, "malformed number");
            tok_.type = Token::Type::Number;
            tok_.number = v;
            at_ += static_cast<std::size_t>(ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = at_;
            while (at_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[at_])) || src_[at_] == '_'))
                ++at_;
            tok_.type = Token::Type::Ident;
            tok_.text = src_.substr(start, at_ - start);
            return;
        }
        ++at_;
        switch (c) {
            case '+': tok_.type = Token::Type::Plus; return;
            case '-': tok_.type = Token::Type::Minus; return;
            case '*': tok_.type = Token::Type::Star; return;
            case '/': tok_.type = Token::Type::Slash; return;
            case '^': tok_.type = Token::Type::Caret; return;
            case '(': tok_.type = Token::Type::LParen; return;
            case ')': tok_.type = Token::Type::RParen; return;
        }
        throw ParseError(tok_.pos, std::string("unexpected character '") + c + "'");
    }

    std::string_view src_;
    std::size_t at_ = 0;
    Token tok_{};
};

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> coords)
        : lex_(src), coords_(coords) {}

    ExprPtr run() {
        ExprPtr e = expr();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End) throw ParseError(t.pos, "trailing input");
        return e;
    }

private:
    // expr := term (('+' | '-') term)*
    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            Token::Type t = lex_.peek().type;
            if (t != Token::Type::Plus && t != Token::Type::Minus) return lhs;
            Token op = lex_.take();
            ExprPtr rhs = term();
            Expr e;
            e.kind = t == Token::Type::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
            e.a = std::move(lhs);
            e.b = std::move(rhs);
            e.pos = op.pos;
            lhs = node(std::move(e));
        }
    }

    // term := unary (('*' | '/') unary)*
    ExprPtr term() {
        ExprPtr lhs = unary();
        for (;;) {
            Token::Type t = lex_.peek().type;
            if (t != Token::Type::Star && t != Token::Type::Slash) return lhs;
            Token op = lex_.take();
            ExprPtr rhs = unary();
            Expr e;
            e.kind = t == Token::Type::Star ? Expr::Kind::Mul : Expr::Kind::Div;
            e.a = std::move(lhs);
            e.b = std::move(rhs);
            e.pos = op.pos;
            lhs = node(std::move(e));
        }
    }

    // unary := '-' unary | power
    ExprPtr unary() {
        if (lex_.peek().type == Token::Type::Minus) {
            Token op = lex_.take();
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.a = unary();
            e.pos = op.pos;
            return node(std::move(e));
        }
        return power();
    }

    // power := atom ('^' unary)?   -- right-associative, and -x binds looser
    // than ^ so 2^-3 parses while -x^2 means -(x^2)
    ExprPtr power() {
        ExprPtr base = atom();
        if (lex_.peek().type != Token::Type::Caret) return base;
        Token op = lex_.take();
        Expr e;
        e.kind = Expr::Kind::Pow;
        e.a = std::move(base);
        e.b = unary();
        e.pos = op.pos;
        return node(std::move(e));
    }

    ExprPtr atom() {
        const Token& t = lex_.peek();
        switch (t.type) {
            case Token::Type::Number: {
                Token tok = lex_.take();
                Expr e;
                e.kind = Expr::Kind::Number;
                e.number = tok.number;
                e.pos = tok.pos;
                return node(std::move(e));
            }
            case Token::Type::LParen: {
                lex_.take();
                ExprPtr inner = expr();
                expect_rparen();
                return inner;
            }
            case Token::Type::Ident: return ident();
            case Token::Type::End: throw ParseError(t.pos, "unexpected end of input");
            default: throw ParseError(t.pos, "expected a value");
        }
    }

    ExprPtr ident() {
        Token tok = lex_.take();
        bool call = lex_.peek().type == Token::Type::LParen;
        if (call) {
            if (tok.text == "norm") {
                lex_.take();
                expect_rparen();
                Expr e;
                e.kind = Expr::Kind::Norm;
                e.pos = tok.pos;
                return node(std::move(e));
            }
            if (auto fn = fn_from_name(tok.text)) {
                lex_.take();
                ExprPtr arg = expr();
                expect_rparen();
                Expr e;
                e.kind = Expr::Kind::Call;
                e.fn = *fn;
                e.a = std::move(arg);
                e.pos = tok.pos;
                return node(std::move(e));
            }
            throw ParseError(tok.pos, "unknown function '" + std::string(tok.text) + "'");
        }
        if (tok.text == "i") {
            Expr e;
            e.kind = Expr::Kind::ImagUnit;
            e.pos = tok.pos;
            return node(std::move(e));
        }
        if (int idx = resolve_coord(tok.text); idx >= 0) {
            Expr e;
            e.kind = Expr::Kind::Coord;
            e.coord = idx;
            e.name = std::string(tok.text);
            e.pos = tok.pos;
            return node(std::move(e));
        }
        throw ParseError(tok.pos, "unknown identifier '" + std::string(tok.text) + "'");
    }

    // declared names win over the positional aliases u1..uN
    int resolve_coord(std::string_view s) const {
        for (std::size_t k = 0; k < coords_.size(); ++k)
            if (coords_[k] == s) return static_cast<int>(k);
        if (s.size() >= 2 && s[0] == 'u') {
            int idx = 0;
            auto [ptr, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), idx);
            if (ec == std::errc() && ptr == s.data() + s.size() && idx >= 1 &&
                idx <= static_cast<int>(coords_.size()))
                return idx - 1;
        }
        return -1;
    }

    void expect_rparen() {
        const Token& t = lex_.peek();
        if (t.type != Token::Type::RParen) throw ParseError(t.pos, "expected ')'");
        lex_.take();
    }

    Lexer lex_;
    std::span<const std::string> coords_;
};

void check_coord_names(std::span<const std::string> coords) {
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const std::string& s = coords[k];
        if (s.empty()) throw std::invalid_argument("empty coordinate name");
        if (s == "i" || s == "norm" || fn_from_name(s))
            throw std::invalid_argument("reserved coordinate name '" + s + "'");
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
            throw std::invalid_argument("bad coordinate name '" + s + "'");
        for (char c : s)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                throw std::invalid_argument("bad coordinate name '" + s + "'");
        for (std::size_t j = 0; j < k; ++j)
            if (coords[j] == s)
                throw std::invalid_argument("duplicate coordinate name '" + s + "'");
    }
}

// precedence used by both the grammar and the printer
int prec(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 10;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 20;
        case Expr::Kind::Neg: return 25;
        case Expr::Kind::Pow: return 30;
        default: return 100;
    }
}

std::string print_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void print_rec(const Expr& e, std::string& out);

void child(const Expr& c, bool parens, std::string& out) {
    if (parens) out += '(';
    print_rec(c, out);
    if (parens) out += ')';
}

void print_rec(const Expr& e, std::string& out) {
    switch (e.kind) {
        case Expr::Kind::Number: out += print_number(e.number); return;
        case Expr::Kind::ImagUnit: out += 'i'; return;
        case Expr::Kind::Coord: out += e.name; return;
        case Expr::Kind::Norm: out += "norm()"; return;
        case Expr::Kind::Call:
            out += fn_name(e.fn);
            out += '(';
            print_rec(*e.a, out);
            out += ')';
            return;
        case Expr::Kind::Neg:
            out += '-';
            child(*e.a, prec(e.a->kind) < prec(Expr::Kind::Neg), out);
            return;
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            child(*e.a, prec(e.a->kind) < 10, out);
            out += e.kind == Expr::Kind::Add ? '+' : '-';
            child(*e.b, prec(e.b->kind) <= 10, out);
            return;
        }
        case Expr::Kind::Mul:
        case Expr::Kind::Div: {
            child(*e.a, prec(e.a->kind) < 20, out);
            out += e.kind == Expr::Kind::Mul ? '*' : '/';
            child(*e.b, prec(e.b->kind) <= 20, out);
            return;
        }
        case Expr::Kind::Pow: {
            child(*e.a, prec(e.a->kind) <= 30, out);
            out += '^';
            // unary minus may appear bare on the right (2^-3)
            child(*e.b, prec(e.b->kind) < 25, out);
            return;
        }
    }
}

}  // namespace

ExprPtr parse(std::string_view text, std::span<const std::string> coords) {
    check_coord_names(coords);
    return Parser(text, coords).run();
}

std::string print(const Expr& e) {
    std::string out;
    print_rec(e, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Expr::Kind::Number: return a.number == b.number;
        case Expr::Kind::ImagUnit:
        case Expr::Kind::Norm: return true;
        case Expr::Kind::Coord: return a.coord == b.coord;
        case Expr::Kind::Call:
            if (a.fn != b.fn) return false;
            return structurally_equal(*a.a, *b.a);
        case Expr::Kind::Neg: return structurally_equal(*a.a, *b.a);
        default: return structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
    }
}

ExprPtr make_num(double v) {
    if (v < 0.0 || (v == 0.0 && std::signbit(v))) return make_neg(make_num(-v));
    Expr e;
    e.kind = Expr::Kind::Number;
    e.number = v;
    return node(std::move(e));
}

ExprPtr make_imag() {
    Expr e;
    e.kind = Expr::Kind::ImagUnit;
    return node(std::move(e));
}

ExprPtr make_coord(int index, std::string name) {
    Expr e;
    e.kind = Expr::Kind::Coord;
    e.coord = index;
    e.name = std::move(name);
    return node(std::move(e));
}

namespace {
ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}
}  // namespace

ExprPtr make_neg(ExprPtr a) {
    Expr e;
    e.kind = Expr::Kind::Neg;
    e.a = std::move(a);
    return node(std::move(e));
}

ExprPtr make_add(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Add, std::move(a), std::move(b)); }
ExprPtr make_sub(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Sub, std::move(a), std::move(b)); }
ExprPtr make_mul(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Mul, std::move(a), std::move(b)); }
ExprPtr make_div(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Div, std::move(a), std::move(b)); }
ExprPtr make_pow(ExprPtr a, ExprPtr b) { return binary(Expr::Kind::Pow, std::move(a), std::move(b)); }

ExprPtr make_call(FnTag fn, ExprPtr a) {
    Expr e;
    e.kind = Expr::Kind::Call;
    e.fn = fn;
    e.a = std::move(a);
    return node(std::move(e));
}

ExprPtr make_norm() {
    Expr e;
    e.kind = Expr::Kind::Norm;
    return node(std::move(e));
}

}  // namespace beltrami
