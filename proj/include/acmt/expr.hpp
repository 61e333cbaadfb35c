#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "acmt/errors.hpp"

namespace acmt {

/// Immutable expression tree over chart variables x1..xD, numeric literals,
/// binary + - * / ^, unary -, and the functions exp, ln, sqrt, sin, cos.
/// Trees are shared; copying an Expr is cheap and evaluation is pure.
class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
    enum class Kind { Constant, Variable, Unary, Binary, Call };
    enum class Fn { Exp, Ln, Sqrt, Sin, Cos };

    Kind kind;
    double value = 0.0;       // Constant
    int var_index = -1;       // Variable: 0-based chart index
    char op = 0;              // Binary: + - * / ^ ; Unary: -
    Fn fn = Fn::Exp;          // Call
    Expr lhs, rhs;            // children (rhs empty for unary/call)

    double eval(const std::vector<double>& point) const;
};

/// Parses with standard precedence (^ above unary minus above * / above + -),
/// left associativity within a level. Identifiers are either chart variables
/// x1..xD or parameter names, which are substituted as constants at parse
/// time. Unknown identifiers are rejected.
Expr parse_expression(const std::string& text,
                      const std::map<std::string, double>& params = {});

double eval_expr(const Expr& e, const std::vector<double>& point);

Expr make_constant(double v);
/// e * exp(-a), used by conformal rescaling of frame columns.
Expr scale_by_exp_minus(const Expr& e, const Expr& a);

} // namespace acmt
