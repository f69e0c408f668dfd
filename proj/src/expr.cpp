#include "parasphere/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace parasphere {

namespace {

bool is_const(const Expr::Ptr& e) { return e->kind == NodeKind::Constant; }

cplx ipow(cplx base, long n) {
    if (n < 0) {
        if (base == cplx(0.0, 0.0))
            throw DomainError("division by zero in negative power");
        return cplx(1.0, 0.0) / ipow(base, -n);
    }
    cplx r(1.0, 0.0);
    cplx b = base;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

} // namespace

Expr::Ptr Expr::make_constant(cplx c) {
    auto e = Ptr(new Expr(NodeKind::Constant));
    const_cast<Expr&>(*e).constant = c;
    return e;
}

Expr::Ptr Expr::make_variable(int index) {
    auto e = Ptr(new Expr(NodeKind::Variable));
    const_cast<Expr&>(*e).var_index = index;
    return e;
}

bool Expr::is_constant(cplx c) const {
    return kind == NodeKind::Constant && constant == c;
}

Expr::Ptr Expr::neg(Ptr a) {
    if (is_const(a)) return make_constant(-a->constant);
    auto e = Ptr(new Expr(NodeKind::Neg));
    const_cast<Expr&>(*e).lhs = std::move(a);
    return e;
}

Expr::Ptr Expr::add(Ptr a, Ptr b) {
    if (a->is_constant({0.0, 0.0})) return b;
    if (b->is_constant({0.0, 0.0})) return a;
    if (is_const(a) && is_const(b)) return make_constant(a->constant + b->constant);
    auto e = Ptr(new Expr(NodeKind::Add));
    const_cast<Expr&>(*e).lhs = std::move(a);
    const_cast<Expr&>(*e).rhs = std::move(b);
    return e;
}

Expr::Ptr Expr::sub(Ptr a, Ptr b) {
    if (b->is_constant({0.0, 0.0})) return a;
    if (a->is_constant({0.0, 0.0})) return neg(b);
    if (is_const(a) && is_const(b)) return make_constant(a->constant - b->constant);
    auto e = Ptr(new Expr(NodeKind::Sub));
    const_cast<Expr&>(*e).lhs = std::move(a);
    const_cast<Expr&>(*e).rhs = std::move(b);
    return e;
}

Expr::Ptr Expr::mul(Ptr a, Ptr b) {
    if (a->is_constant({0.0, 0.0}) || b->is_constant({0.0, 0.0}))
        return make_constant({0.0, 0.0});
    if (a->is_constant({1.0, 0.0})) return b;
    if (b->is_constant({1.0, 0.0})) return a;
    if (is_const(a) && is_const(b)) return make_constant(a->constant * b->constant);
    auto e = Ptr(new Expr(NodeKind::Mul));
    const_cast<Expr&>(*e).lhs = std::move(a);
    const_cast<Expr&>(*e).rhs = std::move(b);
    return e;
}

Expr::Ptr Expr::div(Ptr a, Ptr b) {
    if (a->is_constant({0.0, 0.0}) && !b->is_constant({0.0, 0.0}))
        return make_constant({0.0, 0.0});
    if (b->is_constant({1.0, 0.0})) return a;
    if (is_const(a) && is_const(b) && b->constant != cplx(0.0, 0.0))
        return make_constant(a->constant / b->constant);
    auto e = Ptr(new Expr(NodeKind::Div));
    const_cast<Expr&>(*e).lhs = std::move(a);
    const_cast<Expr&>(*e).rhs = std::move(b);
    return e;
}

Expr::Ptr Expr::pow(Ptr base, long n) {
    if (n == 0) return make_constant({1.0, 0.0});
    if (n == 1) return base;
    if (is_const(base)) return make_constant(ipow(base->constant, n));
    auto e = Ptr(new Expr(NodeKind::Pow));
    const_cast<Expr&>(*e).lhs = std::move(base);
    const_cast<Expr&>(*e).exponent = n;
    return e;
}

Expr::Ptr Expr::exp(Ptr a) {
    auto e = Ptr(new Expr(NodeKind::Exp));
    const_cast<Expr&>(*e).lhs = std::move(a);
    return e;
}

Expr::Ptr Expr::log(Ptr a) {
    auto e = Ptr(new Expr(NodeKind::Log));
    const_cast<Expr&>(*e).lhs = std::move(a);
    return e;
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { Number, Imag, Var, Plus, Minus, Star, Slash, Caret, LParen, RParen, Exp, Log, End };

struct Token {
    Tok kind;
    double number = 0.0;
    int var_index = 0;
    std::size_t pos = 0;
};

class Lexer {
public:
    Lexer(const std::string& text, int m) : text_(text), m_(m) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        cur_.pos = pos_;
        if (pos_ >= text_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = text_[pos_];
        switch (c) {
        case '+': cur_.kind = Tok::Plus; ++pos_; return;
        case '-': cur_.kind = Tok::Minus; ++pos_; return;
        case '*': cur_.kind = Tok::Star; ++pos_; return;
        case '/': cur_.kind = Tok::Slash; ++pos_; return;
        case '^': cur_.kind = Tok::Caret; ++pos_; return;
        case '(': cur_.kind = Tok::LParen; ++pos_; return;
        case ')': cur_.kind = Tok::RParen; ++pos_; return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            std::string lit = text_.substr(start, pos_ - start);
            try {
                cur_.number = std::stod(lit);
            } catch (const std::exception&) {
                throw ParseError("malformed numeric literal '" + lit + "'", start);
            }
            cur_.kind = Tok::Number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            std::string word = text_.substr(start, pos_ - start);
            if (word == "i") { cur_.kind = Tok::Imag; return; }
            if (word == "exp") { cur_.kind = Tok::Exp; return; }
            if (word == "log") { cur_.kind = Tok::Log; return; }
            if (word.size() > 1 && word[0] == 'z') {
                bool digits = true;
                for (std::size_t k = 1; k < word.size(); ++k)
                    if (!std::isdigit(static_cast<unsigned char>(word[k]))) digits = false;
                if (digits) {
                    int idx = std::stoi(word.substr(1));
                    if (idx < 1 || idx > m_)
                        throw ParseError("variable index out of range: " + word +
                                         " (arity " + std::to_string(m_) + ")", start);
                    cur_.kind = Tok::Var;
                    cur_.var_index = idx;
                    return;
                }
            }
            throw ParseError("unknown identifier '" + word + "'", start);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    const std::string& text_;
    int m_;
    std::size_t pos_ = 0;
    Token cur_;
};

class Parser {
public:
    Parser(const std::string& text, int m) : lex_(text, m) {}

    Expr::Ptr run() {
        Expr::Ptr e = sum();
        if (lex_.peek().kind != Tok::End)
            throw ParseError("unexpected trailing input", lex_.peek().pos);
        return e;
    }

private:
    Expr::Ptr sum() {
        Expr::Ptr e = term();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Plus) { lex_.take(); e = Expr::add(e, term()); }
            else if (k == Tok::Minus) { lex_.take(); e = Expr::sub(e, term()); }
            else return e;
        }
    }

    Expr::Ptr term() {
        Expr::Ptr e = unary();
        for (;;) {
            Tok k = lex_.peek().kind;
            if (k == Tok::Star) { lex_.take(); e = Expr::mul(e, unary()); }
            else if (k == Tok::Slash) { lex_.take(); e = Expr::div(e, unary()); }
            else return e;
        }
    }

    Expr::Ptr unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return Expr::neg(unary());
        }
        return power();
    }

    Expr::Ptr power() {
        Expr::Ptr e = atom();
        while (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            e = Expr::pow(e, integer_exponent());
        }
        return e;
    }

    long integer_exponent() {
        long sign = 1;
        if (lex_.peek().kind == Tok::Minus) { lex_.take(); sign = -1; }
        Token t = lex_.peek();
        if (t.kind == Tok::LParen) {
            lex_.take();
            long n = integer_exponent();
            expect(Tok::RParen, "')'");
            return sign * n;
        }
        if (t.kind != Tok::Number)
            throw ParseError("expected integer exponent after '^'", t.pos);
        lex_.take();
        double v = t.number;
        if (v != std::floor(v))
            throw ParseError("non-integer exponent", t.pos);
        return sign * static_cast<long>(v);
    }

    Expr::Ptr atom() {
        Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Number:
            lex_.take();
            return Expr::make_constant({t.number, 0.0});
        case Tok::Imag:
            lex_.take();
            return Expr::make_constant({0.0, 1.0});
        case Tok::Var:
            lex_.take();
            return Expr::make_variable(t.var_index);
        case Tok::LParen: {
            lex_.take();
            Expr::Ptr e = sum();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::Exp: {
            lex_.take();
            expect(Tok::LParen, "'('");
            Expr::Ptr e = sum();
            expect(Tok::RParen, "')'");
            return Expr::exp(e);
        }
        case Tok::Log: {
            lex_.take();
            expect(Tok::LParen, "'('");
            Expr::Ptr e = sum();
            expect(Tok::RParen, "')'");
            return Expr::log(e);
        }
        default:
            throw ParseError("expected expression", t.pos);
        }
    }

    void expect(Tok k, const char* what) {
        if (lex_.peek().kind != k)
            throw ParseError(std::string("expected ") + what, lex_.peek().pos);
        lex_.take();
    }

    Lexer lex_;
};

} // namespace

Expr::Ptr parse(const std::string& text, int m) {
    if (text.empty()) throw ParseError("empty expression", 0);
    if (m < 1) throw std::invalid_argument("arity must be >= 1");
    return Parser(text, m).run();
}

// ------------------------------------------------------------ evaluation

cplx evaluate(const Expr::Ptr& e, const std::vector<cplx>& z) {
    switch (e->kind) {
    case NodeKind::Constant:
        return e->constant;
    case NodeKind::Variable:
        if (e->var_index > static_cast<int>(z.size()))
            throw DomainError("point has too few coordinates for " + to_string(e));
        return z[e->var_index - 1];
    case NodeKind::Neg:
        return -evaluate(e->lhs, z);
    case NodeKind::Add:
        return evaluate(e->lhs, z) + evaluate(e->rhs, z);
    case NodeKind::Sub:
        return evaluate(e->lhs, z) - evaluate(e->rhs, z);
    case NodeKind::Mul:
        return evaluate(e->lhs, z) * evaluate(e->rhs, z);
    case NodeKind::Div: {
        cplx den = evaluate(e->rhs, z);
        if (den == cplx(0.0, 0.0))
            throw DomainError("division by zero in " + to_string(e->rhs));
        return evaluate(e->lhs, z) / den;
    }
    case NodeKind::Pow: {
        cplx base = evaluate(e->lhs, z);
        if (e->exponent < 0 && base == cplx(0.0, 0.0))
            throw DomainError("zero raised to negative power in " + to_string(e));
        return ipow(base, e->exponent);
    }
    case NodeKind::Exp: {
        cplx v = std::exp(evaluate(e->lhs, z));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("non-finite value of " + to_string(e));
        return v;
    }
    case NodeKind::Log: {
        cplx a = evaluate(e->lhs, z);
        if (a == cplx(0.0, 0.0))
            throw DomainError("log of zero in " + to_string(e));
        return std::log(a);
    }
    }
    throw std::logic_error("unreachable expression kind");
}

// --------------------------------------------------------- differentiation

Expr::Ptr differentiate(const Expr::Ptr& e, int k) {
    switch (e->kind) {
    case NodeKind::Constant:
        return Expr::make_constant({0.0, 0.0});
    case NodeKind::Variable:
        return Expr::make_constant(e->var_index == k ? cplx(1.0, 0.0) : cplx(0.0, 0.0));
    case NodeKind::Neg:
        return Expr::neg(differentiate(e->lhs, k));
    case NodeKind::Add:
        return Expr::add(differentiate(e->lhs, k), differentiate(e->rhs, k));
    case NodeKind::Sub:
        return Expr::sub(differentiate(e->lhs, k), differentiate(e->rhs, k));
    case NodeKind::Mul:
        return Expr::add(Expr::mul(differentiate(e->lhs, k), e->rhs),
                         Expr::mul(e->lhs, differentiate(e->rhs, k)));
    case NodeKind::Div:
        // (u/v)' = u'/v - u v'/v^2
        return Expr::sub(Expr::div(differentiate(e->lhs, k), e->rhs),
                         Expr::div(Expr::mul(e->lhs, differentiate(e->rhs, k)),
                                   Expr::pow(e->rhs, 2)));
    case NodeKind::Pow:
        return Expr::mul(
            Expr::mul(Expr::make_constant({static_cast<double>(e->exponent), 0.0}),
                      Expr::pow(e->lhs, e->exponent - 1)),
            differentiate(e->lhs, k));
    case NodeKind::Exp:
        return Expr::mul(Expr::exp(e->lhs), differentiate(e->lhs, k));
    case NodeKind::Log:
        return Expr::div(differentiate(e->lhs, k), e->lhs);
    }
    throw std::logic_error("unreachable expression kind");
}

// --------------------------------------------------------------- printing

namespace {

int precedence_of(NodeKind k) {
    switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
    }
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string print_node(const Expr::Ptr& e);

std::string paren_if(const Expr::Ptr& e, int outer_prec) {
    std::string s = print_node(e);
    if (precedence_of(e->kind) < outer_prec ||
        (e->kind == NodeKind::Constant &&
         (e->constant.imag() != 0.0 || e->constant.real() < 0.0) && outer_prec > 1))
        return "(" + s + ")";
    return s;
}

std::string print_node(const Expr::Ptr& e) {
    switch (e->kind) {
    case NodeKind::Constant: {
        cplx c = e->constant;
        if (c.imag() == 0.0) return fmt_double(c.real());
        if (c.real() == 0.0) {
            if (c.imag() == 1.0) return "i";
            if (c.imag() == -1.0) return "-i";
            return fmt_double(c.imag()) + "*i";
        }
        std::string im = c.imag() == 1.0 ? "i" : fmt_double(c.imag()) + "*i";
        return fmt_double(c.real()) + (c.imag() < 0 ? "" : "+") +
               (c.imag() == 1.0 ? "i" : fmt_double(c.imag()) + "*i");
    }
    case NodeKind::Variable:
        return "z" + std::to_string(e->var_index);
    case NodeKind::Neg:
        return "-" + paren_if(e->lhs, 4);
    case NodeKind::Add:
        return paren_if(e->lhs, 1) + "+" + paren_if(e->rhs, 2);
    case NodeKind::Sub:
        return paren_if(e->lhs, 1) + "-" + paren_if(e->rhs, 2);
    case NodeKind::Mul:
        return paren_if(e->lhs, 2) + "*" + paren_if(e->rhs, 3);
    case NodeKind::Div:
        return paren_if(e->lhs, 2) + "/" + paren_if(e->rhs, 3);
    case NodeKind::Pow: {
        std::string exp_str = e->exponent < 0
            ? "(" + std::to_string(e->exponent) + ")"
            : std::to_string(e->exponent);
        return paren_if(e->lhs, 5) + "^" + exp_str;
    }
    case NodeKind::Exp:
        return "exp(" + print_node(e->lhs) + ")";
    case NodeKind::Log:
        return "log(" + print_node(e->lhs) + ")";
    }
    throw std::logic_error("unreachable expression kind");
}

} // namespace

std::string to_string(const Expr::Ptr& e) { return print_node(e); }

// ------------------------------------------------------------ Prepotential

Prepotential::Prepotential(const std::string& text, int m)
    : m_(m), root_(parse(text, m)), source_(text) {
    build_derivatives();
}

Prepotential::Prepotential(Expr::Ptr root, int m)
    : m_(m), root_(std::move(root)), source_(to_string(root_)) {
    build_derivatives();
}

void Prepotential::build_derivatives() {
    for (int i = 1; i <= m_; ++i) {
        auto di = differentiate(root_, i);
        deriv_[{i}] = di;
        for (int j = i; j <= m_; ++j) {
            auto dij = differentiate(di, j);
            deriv_[{i, j}] = dij;
            for (int k = j; k <= m_; ++k)
                deriv_[{i, j, k}] = differentiate(dij, k);
        }
    }
}

HoloJet Prepotential::jet(const std::vector<cplx>& z) const {
    if (static_cast<int>(z.size()) != m_)
        throw std::invalid_argument("point dimension does not match arity");
    HoloJet j;
    j.m = m_;
    j.value = evaluate(root_, z);
    j.grad.resize(m_);
    j.hess.assign(m_ * m_, {});
    j.third.assign(m_ * m_ * m_, {});
    for (int a = 1; a <= m_; ++a) {
        j.grad[a - 1] = evaluate(deriv_.at({a}), z);
        for (int b = a; b <= m_; ++b) {
            cplx h = evaluate(deriv_.at({a, b}), z);
            j.hess[(a - 1) * m_ + (b - 1)] = h;
            j.hess[(b - 1) * m_ + (a - 1)] = h;
            for (int c = b; c <= m_; ++c) {
                cplx t = evaluate(deriv_.at({a, b, c}), z);
                int idx[3] = {a - 1, b - 1, c - 1};
                // mirror into all 6 permutations
                int p[6][3] = {{0,1,2},{0,2,1},{1,0,2},{1,2,0},{2,0,1},{2,1,0}};
                for (auto& perm : p)
                    j.third[(idx[perm[0]] * m_ + idx[perm[1]]) * m_ + idx[perm[2]]] = t;
            }
        }
    }
    return j;
}

bool Prepotential::is_quadratic() const {
    // probe the third derivatives at a few generic points
    std::vector<std::vector<cplx>> probes;
    for (int s = 0; s < 3; ++s) {
        std::vector<cplx> z(m_);
        for (int a = 0; a < m_; ++a)
            z[a] = cplx(0.31 + 0.17 * s + 0.05 * a, 0.47 + 0.11 * s - 0.03 * a);
        probes.push_back(z);
    }
    for (const auto& [idx, e] : deriv_) {
        if (idx.size() != 3) continue;
        for (const auto& z : probes) {
            cplx v;
            try {
                v = evaluate(e, z);
            } catch (const DomainError&) {
                return false;
            }
            if (std::abs(v) > 1e-12) return false;
        }
    }
    return true;
}

} // namespace parasphere
