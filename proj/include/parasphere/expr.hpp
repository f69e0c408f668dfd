#pragma once

#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace parasphere {

using cplx = std::complex<double>;

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NodeKind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Exp, Log };

// Immutable expression tree for holomorphic functions of z1..zm.
class Expr {
public:
    using Ptr = std::shared_ptr<const Expr>;

    NodeKind kind;
    cplx constant{};   // Constant
    int var_index = 0; // Variable, 1-based
    long exponent = 0; // Pow
    Ptr lhs, rhs;

    static Ptr make_constant(cplx c);
    static Ptr make_variable(int index);
    static Ptr neg(Ptr a);
    static Ptr add(Ptr a, Ptr b);
    static Ptr sub(Ptr a, Ptr b);
    static Ptr mul(Ptr a, Ptr b);
    static Ptr div(Ptr a, Ptr b);
    static Ptr pow(Ptr base, long n);
    static Ptr exp(Ptr a);
    static Ptr log(Ptr a);

    bool is_constant(cplx c) const;

private:
    explicit Expr(NodeKind k) : kind(k) {}
};

// Parse `text` as a prepotential in variables z1..zm.
// Grammar: + - * / ^ with standard precedence, unary minus, parentheses,
// numeric literals, the imaginary unit `i`, exp(...) and log(...).
Expr::Ptr parse(const std::string& text, int m);

// Exact symbolic d(e)/dz_k with light constant folding.
Expr::Ptr differentiate(const Expr::Ptr& e, int k);

cplx evaluate(const Expr::Ptr& e, const std::vector<cplx>& z);

std::string to_string(const Expr::Ptr& e);

// Value and derivatives of F through order three at a point, fully
// symmetric by construction.
struct HoloJet {
    int m = 0;
    cplx value{};
    std::vector<cplx> grad;            // F_i
    std::vector<cplx> hess;            // F_ij, row-major m*m
    std::vector<cplx> third;           // F_ijk, m*m*m

    cplx hess_at(int i, int j) const { return hess[i * m + j]; }
    cplx third_at(int i, int j, int k) const { return third[(i * m + j) * m + k]; }
};

// A prepotential together with its cached symbolic derivatives (through
// order three, all multi-indices precomputed at construction; read-only
// afterwards so concurrent jet evaluation is safe).
class Prepotential {
public:
    Prepotential(const std::string& text, int m);
    Prepotential(Expr::Ptr root, int m);

    int arity() const { return m_; }
    const Expr::Ptr& root() const { return root_; }
    const std::string& source() const { return source_; }

    cplx value(const std::vector<cplx>& z) const { return evaluate(root_, z); }
    HoloJet jet(const std::vector<cplx>& z) const;

    // True when all third derivatives vanish identically (checked by
    // evaluation at a few fixed sample points).
    bool is_quadratic() const;

private:
    void build_derivatives();

    int m_;
    Expr::Ptr root_;
    std::string source_;
    // key: sorted multi-index, e.g. {1}, {1,2}, {2,2,3}
    std::map<std::vector<int>, Expr::Ptr> deriv_;
};

} // namespace parasphere
