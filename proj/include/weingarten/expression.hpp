#pragma once

// Tiny arithmetic grammar for data-driven curvature functions and Weingarten
// relations:
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?                      (right associative)
//   atom   := number | var | fn '(' expr ')' | '(' expr ')'
//   fn     := cot | coth | tan | tanh | exp | sqrt
//
// Variable names are fixed at parse time; evaluation takes the values in the
// same order.  Parse errors throw SchemaError.

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace weingarten {

class Expression {
  public:
    static Expression parse(const std::string& text,
                            const std::vector<std::string>& variables);

    double eval(std::span<const double> values) const;
    const std::string& text() const { return text_; }
    size_t variable_count() const { return n_vars_; }

    struct Node;  // opaque parse tree

  private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    size_t n_vars_ = 0;
};

}  // namespace weingarten
