#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sdot/vec.hpp"

namespace sdot {

struct ExprError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic expression over source coordinates x1,x2,x3 and (for cost
// expressions) target coordinates y1,y2,y3. Supports + - * / ^, unary minus,
// parentheses, numeric literals and the functions exp, log, sqrt.
class Expr {
  public:
    Expr() = default;
    static Expr parse(const std::string& text);

    // vars = {x1, x2, x3, y1, y2, y3}
    double eval(const double* vars) const;
    double eval_point(const Vec& x) const;
    double eval_pair(const Vec& x, const Vec& y) const;

    bool uses_target() const { return uses_target_; }
    const std::string& text() const { return text_; }

  private:
    enum class Op : std::uint8_t {
        Push, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt
    };
    struct Instr {
        Op op;
        double value = 0.0;
        int var = 0;
    };
    std::vector<Instr> prog_;
    std::string text_;
    bool uses_target_ = false;

    friend class ExprParser;
};

}  // namespace sdot
