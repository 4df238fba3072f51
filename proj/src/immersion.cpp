#include "nk/immersion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "nk/errors.hpp"

namespace nk {

// ---------------------------------------------------------------------------
// ExactLit

void ExactLit::trim() {
    while (!coef_.empty() && coef_.back().is_zero()) coef_.pop_back();
}

ExactLit ExactLit::operator-() const {
    ExactLit out = *this;
    for (auto& c : out.coef_) c = -c;
    return out;
}

ExactLit operator+(const ExactLit& a, const ExactLit& b) {
    ExactLit out;
    out.coef_.resize(std::max(a.coef_.size(), b.coef_.size()));
    for (size_t i = 0; i < out.coef_.size(); ++i) {
        if (i < a.coef_.size()) out.coef_[i] += a.coef_[i];
        if (i < b.coef_.size()) out.coef_[i] += b.coef_[i];
    }
    out.trim();
    return out;
}

ExactLit operator-(const ExactLit& a, const ExactLit& b) { return a + (-b); }

ExactLit operator*(const ExactLit& a, const ExactLit& b) {
    ExactLit out;
    if (a.coef_.empty() || b.coef_.empty()) return out;
    out.coef_.assign(a.coef_.size() + b.coef_.size() - 1, ExactK3(0));
    for (size_t i = 0; i < a.coef_.size(); ++i)
        for (size_t j = 0; j < b.coef_.size(); ++j) out.coef_[i + j] += a.coef_[i] * b.coef_[j];
    out.trim();
    return out;
}

ExactLit operator/(const ExactLit& a, const ExactLit& b) {
    if (b.coef_.size() > 1) throw Error("scalar literal division by a pi-dependent value");
    if (b.coef_.empty()) throw Error("scalar literal division by zero");
    ExactLit out = a;
    for (auto& c : out.coef_) c = c / b.coef_[0];
    return out;
}

bool operator==(const ExactLit& a, const ExactLit& b) { return a.coef_ == b.coef_; }

double ExactLit::to_double() const {
    constexpr double kPi = 3.14159265358979323846;
    double acc = 0.0, p = 1.0;
    for (const auto& c : coef_) {
        acc += c.to_double() * p;
        p *= kPi;
    }
    return acc;
}

namespace {

std::string render_k3(const ExactK3& c) {
    const auto& r = c.rational_part();
    const auto& s = c.sqrt3_part();
    if (s == 0) return r.str();
    std::string st = "sqrt3 * " + (s < 0 ? "(" + s.str() + ")" : s.str());
    if (r == 0) return st;
    return "(" + r.str() + " + " + st + ")";
}

}  // namespace

std::string ExactLit::str() const {
    if (coef_.empty()) return "0";
    std::string out;
    for (size_t d = 0; d < coef_.size(); ++d) {
        if (coef_[d].is_zero()) continue;
        std::string term = render_k3(coef_[d]);
        if (term.front() != '(' && term.find(' ') != std::string::npos) term = "(" + term + ")";
        for (size_t k = 0; k < d; ++k) term += " * pi";
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

struct Token {
    enum class Type { Ident, Number, Symbol, End };
    Type type = Type::End;
    std::string text;
    int line = 0, col = 0;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t n = 0;
            while (i + n < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i + n])) || text[i + n] == '_'))
                ++n;
            t.type = Token::Type::Ident;
            t.text = std::string(text.substr(i, n));
            advance(n);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t n = 0;
            while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n]))) ++n;
            if (i + n < text.size() && text[i + n] == '.') {
                ++n;
                while (i + n < text.size() && std::isdigit(static_cast<unsigned char>(text[i + n])))
                    ++n;
            }
            if (i + n < text.size() && (text[i + n] == 'e' || text[i + n] == 'E')) {
                size_t m = n + 1;
                if (i + m < text.size() && (text[i + m] == '+' || text[i + m] == '-')) ++m;
                if (i + m < text.size() && std::isdigit(static_cast<unsigned char>(text[i + m]))) {
                    n = m;
                    while (i + n < text.size() &&
                           std::isdigit(static_cast<unsigned char>(text[i + n])))
                        ++n;
                }
            }
            t.type = Token::Type::Number;
            t.text = std::string(text.substr(i, n));
            advance(n);
        } else if (std::string("()*+-,=/").find(c) != std::string::npos) {
            t.type = Token::Type::Symbol;
            t.text = std::string(1, c);
            advance(1);
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.type = Token::Type::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

BigRational rational_from_decimal(const std::string& text) {
    size_t epos = text.find_first_of("eE");
    std::string mant = epos == std::string::npos ? text : text.substr(0, epos);
    long expo = epos == std::string::npos ? 0 : std::stol(text.substr(epos + 1));
    size_t dotpos = mant.find('.');
    std::string digits = mant;
    long frac = 0;
    if (dotpos != std::string::npos) {
        frac = static_cast<long>(mant.size() - dotpos - 1);
        digits = mant.substr(0, dotpos) + mant.substr(dotpos + 1);
    }
    // cpp_int's string constructor treats a leading 0 as an octal prefix
    size_t first = digits.find_first_not_of('0');
    digits = first == std::string::npos ? "0" : digits.substr(first);
    boost::multiprecision::cpp_int num(digits);
    boost::multiprecision::cpp_int den = 1;
    long shift = expo - frac;
    for (long k = 0; k < std::labs(shift); ++k) {
        if (shift > 0)
            num *= 10;
        else
            den *= 10;
    }
    return BigRational(num, den);
}

// Scalar expressions are folded into exact polynomials over the chart
// variables; only affine results are accepted downstream.
struct Mono {
    std::array<int, 3> deg{0, 0, 0};
    ExactLit coef;
};

struct ScalarPoly {
    std::vector<Mono> terms;

    void add_term(const std::array<int, 3>& deg, const ExactLit& c) {
        for (auto& t : terms) {
            if (t.deg == deg) {
                t.coef = t.coef + c;
                return;
            }
        }
        terms.push_back({deg, c});
    }
    int degree() const {
        int d = 0;
        for (const auto& t : terms)
            if (!t.coef.is_zero()) d = std::max(d, t.deg[0] + t.deg[1] + t.deg[2]);
        return d;
    }
};

ScalarPoly poly_const(const ExactLit& c) {
    ScalarPoly p;
    p.add_term({0, 0, 0}, c);
    return p;
}

ScalarPoly poly_add(const ScalarPoly& a, const ScalarPoly& b, int sign) {
    ScalarPoly out = a;
    for (const auto& t : b.terms) out.add_term(t.deg, sign > 0 ? t.coef : -t.coef);
    return out;
}

ScalarPoly poly_mul(const ScalarPoly& a, const ScalarPoly& b) {
    ScalarPoly out;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            std::array<int, 3> deg{ta.deg[0] + tb.deg[0], ta.deg[1] + tb.deg[1],
                                   ta.deg[2] + tb.deg[2]};
            out.add_term(deg, ta.coef * tb.coef);
        }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Immersion run() {
        expect_keyword("immersion");
        desc_.name = expect_ident("immersion name");
        expect_keyword("vars");
        for (int i = 0; i < 3; ++i) desc_.vars[i] = expect_ident("variable name");
        if (desc_.vars[0] == desc_.vars[1] || desc_.vars[0] == desc_.vars[2] ||
            desc_.vars[1] == desc_.vars[2])
            fail(prev(), "duplicate variable name");
        while (peek_keyword("let")) {
            next();
            Token name = next();
            if (name.type != Token::Type::Ident) fail(name, "expected binding name after 'let'");
            if (is_var(name.text)) fail(name, "binding shadows a chart variable");
            if (lookup_binding(name.text) >= 0) fail(name, "duplicate binding '" + name.text + "'");
            expect_symbol("=");
            int node = parse_qexpr();
            desc_.bindings.emplace_back(name.text, node);
        }
        expect_keyword("left");
        expect_symbol("=");
        desc_.left = parse_qexpr();
        expect_keyword("right");
        expect_symbol("=");
        desc_.right = parse_qexpr();
        const Token& t = peek();
        if (t.type != Token::Type::End) fail(t, "unexpected trailing input");
        return std::move(desc_);
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    Token next() { return toks_[pos_++]; }

    [[noreturn]] static void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg);
    }

    bool peek_keyword(const std::string& kw) const {
        return peek().type == Token::Type::Ident && lower(peek().text) == kw;
    }
    void expect_keyword(const std::string& kw) {
        Token t = next();
        if (t.type != Token::Type::Ident || lower(t.text) != kw)
            fail(t, "expected '" + kw + "'");
    }
    std::string expect_ident(const std::string& what) {
        Token t = next();
        if (t.type != Token::Type::Ident) fail(t, "expected " + what);
        return t.text;
    }
    void expect_symbol(const std::string& s) {
        Token t = next();
        if (t.type != Token::Type::Symbol || t.text != s) fail(t, "expected '" + s + "'");
    }
    void expect_close(const Token& open) {
        Token t = next();
        if (t.type != Token::Type::Symbol || t.text != ")")
            fail(t.type == Token::Type::End ? open : t, "unbalanced '('");
        open_parens_.pop_back();
    }
    Token open_paren(Token t) {
        open_parens_.push_back(t);
        return t;
    }
    static bool structural_keyword(const std::string& id) {
        std::string k = lower(id);
        return k == "left" || k == "right" || k == "let" || k == "vars" || k == "immersion";
    }

    bool is_var(const std::string& name) const {
        return name == desc_.vars[0] || name == desc_.vars[1] || name == desc_.vars[2];
    }
    int var_index(const std::string& name) const {
        for (int i = 0; i < 3; ++i)
            if (desc_.vars[i] == name) return i;
        return -1;
    }
    int lookup_binding(const std::string& name) const {
        for (const auto& [n, id] : desc_.bindings)
            if (n == name) return id;
        return -1;
    }

    // --- scalar expressions -------------------------------------------------

    ScalarPoly parse_scalar_expr() {
        ScalarPoly acc = parse_scalar_term();
        while (peek().type == Token::Type::Symbol && (peek().text == "+" || peek().text == "-")) {
            std::string op = next().text;
            acc = poly_add(acc, parse_scalar_term(), op == "+" ? 1 : -1);
        }
        return acc;
    }

    ScalarPoly parse_scalar_term() {
        ScalarPoly acc = parse_scalar_factor();
        while (peek().type == Token::Type::Symbol && (peek().text == "*" || peek().text == "/")) {
            Token op = next();
            ScalarPoly rhs = parse_scalar_factor();
            if (op.text == "*") {
                acc = poly_mul(acc, rhs);
            } else {
                if (rhs.degree() > 0) fail(op, "division by a variable expression");
                ExactLit d;
                for (const auto& t : rhs.terms) d = d + t.coef;
                if (d.is_zero()) fail(op, "division by zero");
                ScalarPoly out;
                for (const auto& t : acc.terms) out.add_term(t.deg, t.coef / d);
                acc = out;
            }
        }
        return acc;
    }

    ScalarPoly parse_scalar_factor() {
        Token t = next();
        if (t.type == Token::Type::Symbol && t.text == "-") {
            ScalarPoly p = parse_scalar_factor();
            for (auto& m : p.terms) m.coef = -m.coef;
            return p;
        }
        if (t.type == Token::Type::Symbol && t.text == "(") {
            open_paren(t);
            ScalarPoly p = parse_scalar_expr();
            expect_close(t);
            return p;
        }
        if (t.type == Token::Type::Number)
            return poly_const(ExactLit(ExactK3(rational_from_decimal(t.text))));
        if (t.type == Token::Type::Ident) {
            std::string id = lower(t.text);
            if (id == "pi") return poly_const(ExactLit::pi());
            if (id == "sqrt3") return poly_const(ExactLit(ExactK3::sqrt3()));
            int vi = var_index(t.text);
            if (vi >= 0) {
                ScalarPoly p;
                std::array<int, 3> deg{0, 0, 0};
                deg[vi] = 1;
                p.add_term(deg, ExactLit(ExactK3(1)));
                return p;
            }
            fail(t, "unknown scalar name '" + t.text + "'");
        }
        fail(t, "expected a scalar expression");
    }

    ScalarAffine to_affine(const ScalarPoly& p, const Token& where) {
        if (p.degree() > 1) fail(where, "non-affine scalar expression in exp()");
        ScalarAffine a;
        for (const auto& t : p.terms) {
            if (t.coef.is_zero()) continue;
            int total = t.deg[0] + t.deg[1] + t.deg[2];
            if (total == 0) {
                a.coef[0] = a.coef[0] + t.coef;
            } else {
                for (int v = 0; v < 3; ++v)
                    if (t.deg[v] == 1) a.coef[v + 1] = a.coef[v + 1] + t.coef;
            }
        }
        a.finalize();
        return a;
    }

    ExactLit to_constant(const ScalarPoly& p, const Token& where) {
        if (p.degree() > 0) fail(where, "expected a constant scalar");
        ExactLit c;
        for (const auto& t : p.terms) c = c + t.coef;
        return c;
    }

    // --- quaternion expressions ---------------------------------------------

    int add_node(QNode n) {
        desc_.nodes.push_back(std::move(n));
        return static_cast<int>(desc_.nodes.size()) - 1;
    }

    int parse_qexpr() {
        int acc = parse_qfactor();
        while (peek().type == Token::Type::Symbol && peek().text == "*") {
            next();
            int rhs = parse_qfactor();
            QNode n;
            n.kind = QNode::Kind::Mul;
            n.lhs = acc;
            n.rhs = rhs;
            acc = add_node(std::move(n));
        }
        return acc;
    }

    int parse_qfactor() {
        Token t = next();
        if (t.type == Token::Type::Symbol && t.text == "(") {
            open_paren(t);
            int id = parse_qexpr();
            expect_close(t);
            return id;
        }
        if (t.type != Token::Type::Ident) {
            if (t.type == Token::Type::End && !open_parens_.empty())
                fail(open_parens_.back(), "unbalanced '('");
            fail(t, "expected a quaternion expression");
        }
        std::string kw = lower(t.text);
        if (kw == "const") {
            Token open = next();
            if (open.type != Token::Type::Symbol || open.text != "(")
                fail(open, "expected '(' after const");
            open_paren(open);
            QNode n;
            n.kind = QNode::Kind::Const;
            for (int i = 0; i < 4; ++i) {
                Token start = peek();
                n.literal[i] = to_constant(parse_scalar_expr(), start);
                n.literal_cached[i] = n.literal[i].to_double();
                if (i < 3) expect_symbol(",");
            }
            expect_close(open);
            double n2 = 0;
            for (double c : n.literal_cached) n2 += c * c;
            if (std::fabs(n2 - 1.0) > 1e-12)
                fail(t, "const(...) must be a unit quaternion");
            return add_node(std::move(n));
        }
        if (kw == "exp") {
            Token open = next();
            if (open.type != Token::Type::Symbol || open.text != "(")
                fail(open, "expected '(' after exp");
            open_paren(open);
            QNode n;
            n.kind = QNode::Kind::Exp;
            for (int i = 0; i < 3; ++i) {
                Token start = peek();
                n.arg[i] = to_affine(parse_scalar_expr(), start);
                if (i < 2) expect_symbol(",");
            }
            expect_close(open);
            return add_node(std::move(n));
        }
        if (kw == "inv") {
            Token open = next();
            if (open.type != Token::Type::Symbol || open.text != "(")
                fail(open, "expected '(' after inv");
            open_paren(open);
            int child = parse_qexpr();
            expect_close(open);
            QNode n;
            n.kind = QNode::Kind::Inv;
            n.lhs = child;
            return add_node(std::move(n));
        }
        if (is_var(t.text)) fail(t, "chart variable '" + t.text + "' used as a quaternion");
        int target = lookup_binding(t.text);
        if (target < 0) {
            // a structural keyword swallowed by an unclosed group: point at
            // the offending '(' instead of the keyword
            if (structural_keyword(t.text) && !open_parens_.empty())
                fail(open_parens_.back(), "unbalanced '('");
            fail(t, "unbound identifier '" + t.text + "'");
        }
        QNode n;
        n.kind = QNode::Kind::Ref;
        n.target = target;
        return add_node(std::move(n));
    }

    std::vector<Token> toks_;
    std::vector<Token> open_parens_;
    size_t pos_ = 0;
    Immersion desc_;
};

}  // namespace

Immersion parse_immersion(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string render_affine(const ScalarAffine& a, const std::array<std::string, 3>& vars) {
    std::string out;
    if (!a.coef[0].is_zero()) out = a.coef[0].str();
    for (int v = 0; v < 3; ++v) {
        const ExactLit& c = a.coef[v + 1];
        if (c.is_zero()) continue;
        std::string term;
        if (c == ExactLit(ExactK3(1)))
            term = vars[v];
        else
            term = "(" + c.str() + ") * " + vars[v];
        out += out.empty() ? term : " + " + term;
    }
    return out.empty() ? "0" : out;
}

void render_node(const Immersion& d, int id, std::ostringstream& os) {
    for (const auto& [name, node] : d.bindings) {
        if (node == id) {
            os << name;
            return;
        }
    }
    const QNode& n = d.nodes[id];
    switch (n.kind) {
        case QNode::Kind::Const:
            os << "const(" << n.literal[0].str() << ", " << n.literal[1].str() << ", "
               << n.literal[2].str() << ", " << n.literal[3].str() << ")";
            break;
        case QNode::Kind::Ref:
            render_node(d, n.target, os);
            break;
        case QNode::Kind::Exp:
            os << "exp(" << render_affine(n.arg[0], d.vars) << ", "
               << render_affine(n.arg[1], d.vars) << ", " << render_affine(n.arg[2], d.vars) << ")";
            break;
        case QNode::Kind::Mul:
            render_node(d, n.lhs, os);
            os << " * ";
            render_node(d, n.rhs, os);
            break;
        case QNode::Kind::Inv:
            os << "inv(";
            render_node(d, n.lhs, os);
            os << ")";
            break;
    }
}

}  // namespace

std::string print_immersion(const Immersion& desc) {
    std::ostringstream os;
    os << "immersion " << desc.name << "\n";
    os << "vars " << desc.vars[0] << " " << desc.vars[1] << " " << desc.vars[2] << "\n";
    for (const auto& [name, node] : desc.bindings) {
        os << "let " << name << " = ";
        const QNode& n = desc.nodes[node];
        // render the binding body, not the name
        std::ostringstream body;
        switch (n.kind) {
            case QNode::Kind::Mul:
                render_node(desc, n.lhs, body);
                body << " * ";
                render_node(desc, n.rhs, body);
                break;
            case QNode::Kind::Inv:
                body << "inv(";
                render_node(desc, n.lhs, body);
                body << ")";
                break;
            default: {
                Immersion shadow = desc;
                shadow.bindings.clear();
                render_node(shadow, node, body);
            }
        }
        os << body.str() << "\n";
    }
    os << "left = ";
    render_node(desc, desc.left, os);
    os << "\nright = ";
    render_node(desc, desc.right, os);
    os << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Jet {
    QuaternionD v;
    std::array<QuaternionD, 3> d{};
};

QuaternionD literal_value(const QNode& n) {
    return {n.literal_cached[0], n.literal_cached[1], n.literal_cached[2], n.literal_cached[3]};
}

ImaginaryD exp_arg(const QNode& n, const Vec3& p) {
    return {n.arg[0].eval(p), n.arg[1].eval(p), n.arg[2].eval(p)};
}

std::vector<QuaternionD> eval_values(const Immersion& d, const Vec3& p) {
    std::vector<QuaternionD> vals(d.nodes.size());
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        const QNode& n = d.nodes[i];
        switch (n.kind) {
            case QNode::Kind::Const: vals[i] = literal_value(n); break;
            case QNode::Kind::Ref: vals[i] = vals[n.target]; break;
            case QNode::Kind::Exp: vals[i] = exp_im(exp_arg(n, p)).value(); break;
            case QNode::Kind::Mul: vals[i] = vals[n.lhs] * vals[n.rhs]; break;
            case QNode::Kind::Inv: vals[i] = vals[n.lhs].inverse(); break;
        }
    }
    return vals;
}

std::vector<Jet> eval_jets(const Immersion& d, const Vec3& p) {
    std::vector<Jet> jets(d.nodes.size());
    for (size_t i = 0; i < d.nodes.size(); ++i) {
        const QNode& n = d.nodes[i];
        Jet& out = jets[i];
        switch (n.kind) {
            case QNode::Kind::Const:
                out.v = literal_value(n);
                break;
            case QNode::Kind::Ref:
                out = jets[n.target];
                break;
            case QNode::Kind::Exp: {
                ImaginaryD w = exp_arg(n, p);
                out.v = exp_im(w).value();
                std::array<std::array<double, 3>, 3> grads{n.arg[0].gradient(), n.arg[1].gradient(),
                                                           n.arg[2].gradient()};
                for (int k = 0; k < 3; ++k) {
                    ImaginaryD dir{grads[0][k], grads[1][k], grads[2][k]};
                    out.d[k] = dexp_im(w, dir);
                }
                break;
            }
            case QNode::Kind::Mul: {
                const Jet& a = jets[n.lhs];
                const Jet& b = jets[n.rhs];
                out.v = a.v * b.v;
                for (int k = 0; k < 3; ++k) out.d[k] = a.d[k] * b.v + a.v * b.d[k];
                break;
            }
            case QNode::Kind::Inv: {
                const Jet& a = jets[n.lhs];
                out.v = a.v.inverse();
                for (int k = 0; k < 3; ++k) out.d[k] = -1.0 * (out.v * a.d[k] * out.v);
                break;
            }
        }
    }
    return jets;
}

ManifoldPointD to_point(const QuaternionD& l, const QuaternionD& r) {
    if (std::fabs(std::sqrt(l.norm_sq()) - 1.0) > 1e-12 ||
        std::fabs(std::sqrt(r.norm_sq()) - 1.0) > 1e-12)
        throw IntegrityError("immersion value drifted off the unit sphere");
    return {UnitQuaternionD::from(l), UnitQuaternionD::from(r)};
}

}  // namespace

ManifoldPointD evaluate(const Immersion& desc, const Vec3& chart_point) {
    auto vals = eval_values(desc, chart_point);
    return to_point(vals[desc.left], vals[desc.right]);
}

std::array<std::pair<QuaternionD, QuaternionD>, 3> jacobian_ambient(const Immersion& desc,
                                                                    const Vec3& chart_point) {
    auto jets = eval_jets(desc, chart_point);
    std::array<std::pair<QuaternionD, QuaternionD>, 3> out;
    for (int k = 0; k < 3; ++k)
        out[k] = {jets[desc.left].d[k], jets[desc.right].d[k]};
    return out;
}

std::array<TangentVectorD, 3> jacobian(const Immersion& desc, const Vec3& chart_point) {
    auto jets = eval_jets(desc, chart_point);
    ManifoldPointD pt = to_point(jets[desc.left].v, jets[desc.right].v);
    std::array<TangentVectorD, 3> out;
    for (int k = 0; k < 3; ++k)
        out[k] = lie_coords(pt, jets[desc.left].d[k], jets[desc.right].d[k]);
    return out;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

const std::vector<std::pair<std::string, const char*>>& catalog_sources() {
    static const std::vector<std::pair<std::string, const char*>> sources = {
        {"f1",
         "immersion f1\n"
         "vars x y z\n"
         "left = const(1, 0, 0, 0)\n"
         "right = exp(x, y, z)\n"},
        {"f2",
         "immersion f2\n"
         "vars x y z\n"
         "left = exp(x, y, z)\n"
         "right = const(1, 0, 0, 0)\n"},
        {"f3",
         "immersion f3\n"
         "vars x y z\n"
         "let u = exp(x, y, z)\n"
         "left = u\n"
         "right = u\n"},
        {"f4",
         "immersion f4\n"
         "vars x y z\n"
         "let u = exp(x, y, z)\n"
         "left = u\n"
         "right = u * const(0, 1, 0, 0)\n"},
        {"f5",
         "immersion f5\n"
         "vars x y z\n"
         "let u = exp(x, y, z)\n"
         "left = u * const(0, 1, 0, 0) * inv(u)\n"
         "right = inv(u)\n"},
        {"f6",
         "immersion f6\n"
         "vars x y z\n"
         "let u = exp(x, y, z)\n"
         "left = inv(u)\n"
         "right = u * const(0, 1, 0, 0) * inv(u)\n"},
        {"f7",
         "immersion f7\n"
         "vars x y z\n"
         "let u = exp(x, y, z)\n"
         "left = u * const(0, 1, 0, 0) * inv(u)\n"
         "right = u * const(0, 0, 1, 0) * inv(u)\n"},
        {"f8",
         "immersion f8\n"
         "vars x y z\n"
         "left = exp(sqrt3 * 0.5 * z, 0, 0) * exp(0, sqrt3 * 0.5 * x, 0)\n"
         "right = exp(sqrt3 * 0.5 * y, 0, 0) * exp(0, sqrt3 * 0.5 * x - pi * 0.25, 0)\n"},
    };
    return sources;
}

}  // namespace

const Immersion& catalog(const std::string& name) {
    static std::map<std::string, Immersion> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (const auto& [n, src] : catalog_sources()) cache.emplace(n, parse_immersion(src));
    });
    auto it = cache.find(name);
    if (it == cache.end()) throw ConfigError("unknown catalog immersion '" + name + "'");
    return it->second;
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [n, src] : catalog_sources()) out.push_back(n);
        return out;
    }();
    return names;
}

}  // namespace nk
