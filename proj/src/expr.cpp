#include "sdot/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace sdot {

namespace {

struct Token {
    enum Kind { Number, Ident, Sym, End } kind;
    double value = 0.0;
    std::string text;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) pos_++;
        if (pos_ >= s_.size()) {
            tok_ = Token{Token::End, 0.0, ""};
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            if (end == start) throw ExprError("bad numeric literal at position " + std::to_string(pos_));
            pos_ += static_cast<size_t>(end - start);
            tok_ = Token{Token::Number, v, ""};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                pos_++;
            tok_ = Token{Token::Ident, 0.0, s_.substr(start, pos_ - start)};
            return;
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            pos_++;
            tok_ = Token{Token::Sym, 0.0, std::string(1, c)};
            return;
        }
        throw ExprError(std::string("unexpected character '") + c + "' at position " + std::to_string(pos_));
    }

    std::string s_;
    size_t pos_ = 0;
    Token tok_;
};

}  // namespace

class ExprParser {
  public:
    explicit ExprParser(const std::string& text) : lex_(text) {}

    Expr run(const std::string& text) {
        parse_sum();
        if (lex_.peek().kind != Token::End)
            throw ExprError("trailing input after expression: '" + lex_.peek().text + "'");
        Expr e;
        e.prog_ = std::move(prog_);
        e.text_ = text;
        e.uses_target_ = uses_target_;
        return e;
    }

  private:
    using Op = Expr::Op;

    void emit(Op op, double v = 0.0, int var = 0) { prog_.push_back({op, v, var}); }

    void parse_sum() {
        parse_product();
        while (is_sym("+") || is_sym("-")) {
            std::string s = lex_.take().text;
            parse_product();
            emit(s == "+" ? Op::Add : Op::Sub);
        }
    }

    void parse_product() {
        parse_unary();
        while (is_sym("*") || is_sym("/")) {
            std::string s = lex_.take().text;
            parse_unary();
            emit(s == "*" ? Op::Mul : Op::Div);
        }
    }

    void parse_unary() {
        if (is_sym("-")) {
            lex_.take();
            parse_unary();
            emit(Op::Neg);
            return;
        }
        parse_power();
    }

    void parse_power() {
        parse_atom();
        if (is_sym("^")) {
            lex_.take();
            parse_unary();  // right associative, binds exponent sign
            emit(Op::Pow);
        }
    }

    void parse_atom() {
        Token t = lex_.take();
        if (t.kind == Token::Number) {
            emit(Op::Push, t.value);
            return;
        }
        if (t.kind == Token::Ident) {
            if (is_sym("(")) {
                lex_.take();
                parse_sum();
                expect(")");
                if (t.text == "exp") emit(Op::Exp);
                else if (t.text == "log") emit(Op::Log);
                else if (t.text == "sqrt") emit(Op::Sqrt);
                else throw ExprError("unknown function '" + t.text + "'");
                return;
            }
            int var = var_index(t.text);
            if (var < 0) throw ExprError("unknown identifier '" + t.text + "'");
            if (var >= 3) uses_target_ = true;
            emit(Op::Var, 0.0, var);
            return;
        }
        if (t.kind == Token::Sym && t.text == "(") {
            parse_sum();
            expect(")");
            return;
        }
        throw ExprError("expected a value, got '" + t.text + "'");
    }

    static int var_index(const std::string& name) {
        static const char* names[6] = {"x1", "x2", "x3", "y1", "y2", "y3"};
        for (int i = 0; i < 6; i++)
            if (name == names[i]) return i;
        return -1;
    }

    bool is_sym(const char* s) const {
        return lex_.peek().kind == Token::Sym && lex_.peek().text == s;
    }
    void expect(const char* s) {
        if (!is_sym(s)) throw ExprError(std::string("expected '") + s + "'");
        lex_.take();
    }

    Lexer lex_;
    std::vector<Expr::Instr> prog_;
    bool uses_target_ = false;
};

Expr Expr::parse(const std::string& text) { return ExprParser(text).run(text); }

double Expr::eval(const double* vars) const {
    double stack[64];
    int top = 0;
    for (const Instr& in : prog_) {
        switch (in.op) {
            case Op::Push: stack[top++] = in.value; break;
            case Op::Var: stack[top++] = vars[in.var]; break;
            case Op::Add: top--; stack[top - 1] += stack[top]; break;
            case Op::Sub: top--; stack[top - 1] -= stack[top]; break;
            case Op::Mul: top--; stack[top - 1] *= stack[top]; break;
            case Op::Div: top--; stack[top - 1] /= stack[top]; break;
            case Op::Pow: top--; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
            case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
            case Op::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
            case Op::Log: stack[top - 1] = std::log(stack[top - 1]); break;
            case Op::Sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
        }
        if (top >= 63) throw ExprError("expression too deep");
    }
    return stack[0];
}

double Expr::eval_point(const Vec& x) const {
    double vars[6] = {x[0], x[1], x[2], 0.0, 0.0, 0.0};
    return eval(vars);
}

double Expr::eval_pair(const Vec& x, const Vec& y) const {
    double vars[6] = {x[0], x[1], x[2], y[0], y[1], y[2]};
    return eval(vars);
}

}  // namespace sdot
