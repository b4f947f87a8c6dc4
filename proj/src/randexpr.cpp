#include "hasse/randexpr.hpp"

#include <algorithm>

namespace hasse {

bool operator==(const RandExpr& a, const RandExpr& b) {
    return a.kind == b.kind && a.name == b.name && a.children == b.children;
}

namespace {

constexpr const char* kWedge = "∧";  // ∧
constexpr const char* kOtimes = "⊗"; // ⊗
constexpr const char* kArrow = "→";  // →

enum class Tok { Name, Caret, Otimes, LBracket, RBracket, LBrace, RBrace, Equals, Arrow, End };

struct Token {
    Tok kind;
    std::string text;
};

struct Lexer {
    std::string_view s;
    size_t i = 0;
    std::vector<Token> tokens;

    bool starts(const char* lit) const {
        std::string_view l(lit);
        return s.substr(i, l.size()) == l;
    }
    void run() {
        std::string name;
        auto flush = [&] {
            size_t b = name.find_first_not_of(" \t");
            if (b == std::string::npos) {
                name.clear();
                return;
            }
            size_t e = name.find_last_not_of(" \t");
            tokens.push_back({Tok::Name, name.substr(b, e - b + 1)});
            name.clear();
        };
        while (i < s.size()) {
            if (starts("^") || starts(kWedge)) {
                flush();
                tokens.push_back({Tok::Caret, "^"});
                i += starts("^") ? 1 : 3;
            } else if (starts(kOtimes) || starts("(x)")) {
                flush();
                tokens.push_back({Tok::Otimes, "⊗"});
                i += starts("(x)") ? 3 : 3;
            } else if (starts(kArrow) || starts("->")) {
                flush();
                tokens.push_back({Tok::Arrow, "→"});
                i += starts("->") ? 2 : 3;
            } else if (starts("[")) {
                flush();
                tokens.push_back({Tok::LBracket, "["});
                ++i;
            } else if (starts("]")) {
                flush();
                tokens.push_back({Tok::RBracket, "]"});
                ++i;
            } else if (starts("{")) {
                flush();
                tokens.push_back({Tok::LBrace, "{"});
                ++i;
            } else if (starts("}")) {
                flush();
                tokens.push_back({Tok::RBrace, "}"});
                ++i;
            } else if (starts("=")) {
                flush();
                tokens.push_back({Tok::Equals, "="});
                ++i;
            } else if (starts("(") || starts(")")) {
                throw ParseError("unexpected '" + std::string(1, s[i]) +
                                 "' in randomisation expression (grouping uses braces)");
            } else {
                name += s[i];
                ++i;
            }
        }
        flush();
        tokens.push_back({Tok::End, ""});
    }
};

struct Parser {
    const std::vector<Token>& t;
    size_t pos = 0;

    const Token& peek() const { return t[pos]; }
    Token take() { return t[pos++]; }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw ParseError(std::string("expected ") + what);
        ++pos;
    }

    // label := expr ('→' expr)?
    RandExpr label() {
        RandExpr lhs = expr();
        if (peek().kind == Tok::Arrow) {
            take();
            RandExpr rhs = expr();
            RandExpr out;
            out.kind = RandExpr::Kind::Arrow;
            out.children = {std::move(lhs), std::move(rhs)};
            return out;
        }
        return lhs;
    }

    // expr := (NAME '=')? chain ('[' expr ']')*
    RandExpr expr() {
        if (peek().kind == Tok::Name && t[pos + 1].kind == Tok::Equals) {
            RandExpr out;
            out.kind = RandExpr::Kind::Alias;
            out.name = take().text;
            take(); // '='
            out.children.push_back(expr());
            return out;
        }
        RandExpr cur = chain();
        while (peek().kind == Tok::LBracket) {
            take();
            RandExpr ctx = expr();
            expect(Tok::RBracket, "']'");
            RandExpr w;
            w.kind = RandExpr::Kind::Within;
            w.children = {std::move(cur), std::move(ctx)};
            cur = std::move(w);
        }
        return cur;
    }

    // chain := atom (op atom)*  with a single operator kind per chain
    RandExpr chain() {
        std::vector<RandExpr> parts;
        parts.push_back(atom());
        Tok op = Tok::End;
        while (peek().kind == Tok::Caret || peek().kind == Tok::Otimes) {
            Tok k = take().kind;
            if (op == Tok::End)
                op = k;
            else if (op != k)
                throw ParseError("mixed '^' and '⊗' without braces are ambiguous");
            parts.push_back(atom());
        }
        if (parts.size() == 1) return std::move(parts[0]);
        RandExpr out;
        out.kind = op == Tok::Caret ? RandExpr::Kind::Combine : RandExpr::Kind::Independent;
        out.children = std::move(parts);
        return out;
    }

    RandExpr atom() {
        if (peek().kind == Tok::Name) return RandExpr::base(take().text);
        if (peek().kind == Tok::LBrace) {
            take();
            RandExpr inner = expr();
            expect(Tok::RBrace, "'}'");
            return inner;
        }
        if (peek().kind == Tok::End) throw ParseError("empty operand in randomisation expression");
        throw ParseError("unexpected '" + peek().text + "' in randomisation expression");
    }
};

// A chain child that is itself structured needs braces to survive reparsing.
bool child_needs_braces(const RandExpr& c) {
    switch (c.kind) {
    case RandExpr::Kind::Base: return false;
    default: return true;
    }
}

} // namespace

RandExpr parse_rand_expr(std::string_view label) {
    Lexer lex{label, 0, {}};
    lex.run();
    Parser p{lex.tokens};
    RandExpr out = p.label();
    if (p.peek().kind != Tok::End) throw ParseError("trailing input after randomisation expression");
    return out;
}

std::string format_rand_expr(const RandExpr& e) {
    switch (e.kind) {
    case RandExpr::Kind::Base: return e.name;
    case RandExpr::Kind::Alias: return e.name + "=" + format_rand_expr(e.children[0]);
    case RandExpr::Kind::Arrow:
        return format_rand_expr(e.children[0]) + " " + "→" + " " +
               format_rand_expr(e.children[1]);
    case RandExpr::Kind::Combine: {
        std::string out;
        for (size_t i = 0; i < e.children.size(); ++i) {
            if (i) out += "^";
            bool braces = child_needs_braces(e.children[i]);
            out += braces ? "{" + format_rand_expr(e.children[i]) + "}"
                          : format_rand_expr(e.children[i]);
        }
        return out;
    }
    case RandExpr::Kind::Independent: {
        std::string out;
        for (size_t i = 0; i < e.children.size(); ++i) {
            if (i) out += " ⊗ ";
            bool braces = child_needs_braces(e.children[i]);
            out += braces ? "{" + format_rand_expr(e.children[i]) + "}"
                          : format_rand_expr(e.children[i]);
        }
        return out;
    }
    case RandExpr::Kind::Within: {
        const RandExpr& inner = e.children[0];
        std::string head;
        // "A^B[C]" reparses correctly without braces; "A ⊗ B[C]" would not
        // mean this tree, so Independent inners keep their braces.
        if (inner.kind == RandExpr::Kind::Independent)
            head = "{" + format_rand_expr(inner) + "}";
        else if (inner.kind == RandExpr::Kind::Alias || inner.kind == RandExpr::Kind::Arrow)
            head = "{" + format_rand_expr(inner) + "}";
        else
            head = format_rand_expr(inner);
        return head + "[" + format_rand_expr(e.children[1]) + "]";
    }
    }
    return {};
}

std::vector<std::string> base_names(const RandExpr& e) {
    std::vector<std::string> out;
    if (e.kind == RandExpr::Kind::Base) out.push_back(e.name);
    if (e.kind == RandExpr::Kind::Alias) out.push_back(e.name);
    for (const auto& c : e.children) {
        auto sub = base_names(c);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

namespace {

bool is_base(const RandExpr& e) { return e.kind == RandExpr::Kind::Base; }

RandExpr combine2(RandExpr a, RandExpr b, RandExpr::Kind k) {
    RandExpr out;
    out.kind = k;
    out.children = {std::move(a), std::move(b)};
    return out;
}

RandExpr within(RandExpr inner, RandExpr ctx) {
    RandExpr out;
    out.kind = RandExpr::Kind::Within;
    out.children = {std::move(inner), std::move(ctx)};
    return out;
}

} // namespace

std::vector<RandExpr> rand_nest_set(const RandExpr& expr) {
    const RandExpr& e = expr.kind == RandExpr::Kind::Alias ? expr.children[0] : expr;
    const RandExpr mean = RandExpr::base("Mean");
    using K = RandExpr::Kind;

    auto unsupported = [&] {
        return Error("unsupported randomisation expression '" + format_rand_expr(expr) +
                     "': randomisation-nesting is defined for single factors and the eight "
                     "supported compound forms only");
    };

    if (e.kind == K::Base) return {mean};

    if (e.kind == K::Combine) { // A^B -> Mean, A, B
        if (e.children.size() != 2 || !is_base(e.children[0]) || !is_base(e.children[1]))
            throw unsupported();
        return {mean, e.children[0], e.children[1]};
    }

    if (e.kind == K::Independent) {
        if (e.children.size() == 2 && is_base(e.children[0]) && is_base(e.children[1]))
            return {mean, e.children[0], e.children[1]}; // A ⊗ B
        if (e.children.size() == 2 && is_base(e.children[0]) &&
            e.children[1].kind == K::Within && is_base(e.children[1].children[0]) &&
            is_base(e.children[1].children[1])) {
            // A ⊗ {B[C]} -> Mean, A ⊗ C, B[C], A, C
            const RandExpr& a = e.children[0];
            const RandExpr& b = e.children[1].children[0];
            const RandExpr& c = e.children[1].children[1];
            return {mean, combine2(a, c, K::Independent), within(b, c), a, c};
        }
        if (e.children.size() == 3 && is_base(e.children[0]) && is_base(e.children[1]) &&
            is_base(e.children[2])) {
            // A ⊗ B ⊗ C -> Mean, A, B, C, A⊗B, A⊗C, B⊗C
            const RandExpr &a = e.children[0], &b = e.children[1], &c = e.children[2];
            return {mean,
                    a,
                    b,
                    c,
                    combine2(a, b, K::Independent),
                    combine2(a, c, K::Independent),
                    combine2(b, c, K::Independent)};
        }
        throw unsupported();
    }

    if (e.kind == K::Within) {
        const RandExpr& inner = e.children[0];
        const RandExpr& ctx = e.children[1];
        if (is_base(inner) && is_base(ctx)) return {mean, ctx}; // A[B]
        if (inner.kind == K::Independent && inner.children.size() == 2 &&
            is_base(inner.children[0]) && is_base(inner.children[1]) && is_base(ctx)) {
            // {A ⊗ B}[C] -> Mean, A[C], B[C], C
            return {mean, within(inner.children[0], ctx), within(inner.children[1], ctx), ctx};
        }
        if (is_base(inner) && ctx.kind == K::Independent && ctx.children.size() == 2 &&
            is_base(ctx.children[0]) && is_base(ctx.children[1])) {
            // A[B ⊗ C] -> Mean, B ⊗ C, B, C
            return {mean, ctx, ctx.children[0], ctx.children[1]};
        }
        throw unsupported();
    }

    throw unsupported();
}

} // namespace hasse
