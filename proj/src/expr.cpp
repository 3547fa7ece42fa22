// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

// The opponent expression language: unsigned 64-bit arithmetic over the
// variables x, y and t. Every node evaluated costs one unit of fuel.

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dialectic/error.hpp"
#include "dialectic/opponents.hpp"
#include "text_util.hpp"

namespace dialectic {

namespace {

enum class Op {
    kConst, kVarX, kVarY, kVarT, kLoop,
    kNot, kBitNot, kNeg,
    kAdd, kSub, kMul, kDiv, kMod,
    kShl, kShr, kAnd, kOr, kXor,
    kLt, kLe, kGt, kGe, kEq, kNe,
    kLogAnd, kLogOr,
    kMin, kMax, kCond,
};

struct Node {
    Op op;
    std::uint64_t value = 0;
    std::vector<std::unique_ptr<Node>> kids;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr leaf(Op op, std::uint64_t v = 0) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->value = v;
    return n;
}

NodePtr make(Op op, std::vector<NodePtr> kids) {
    auto n = leaf(op);
    n->kids = std::move(kids);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr n = ternary();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(1, pos_ + 1, what);
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        // keep "<" from swallowing "<<" and "<=", and so on
        const std::size_t end = pos_ + tok.size();
        if (end < text_.size() && tok.size() == 1) {
            const char c = tok[0], d = text_[end];
            if ((c == '<' || c == '>') && (d == c || d == '=')) return false;
            if ((c == '&' || c == '|') && d == c) return false;
            if ((c == '!' || c == '=') && d == '=') return false;
        }
        pos_ = end;
        return true;
    }

    void expect(std::string_view tok) {
        if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
    }

    NodePtr ternary() {
        NodePtr c = binary(0);
        if (!eat("?")) return c;
        NodePtr a = ternary();
        expect(":");
        NodePtr b = ternary();
        std::vector<NodePtr> kids;
        kids.push_back(std::move(c));
        kids.push_back(std::move(a));
        kids.push_back(std::move(b));
        return make(Op::kCond, std::move(kids));
    }

    struct Level {
        std::vector<std::pair<std::string_view, Op>> ops;
    };

    static const std::vector<Level>& levels() {
        static const std::vector<Level> table = {
            {{{"||", Op::kLogOr}}},
            {{{"&&", Op::kLogAnd}}},
            {{{"|", Op::kOr}}},
            {{{"^", Op::kXor}}},
            {{{"&", Op::kAnd}}},
            {{{"==", Op::kEq}, {"!=", Op::kNe}}},
            {{{"<=", Op::kLe}, {">=", Op::kGe}, {"<", Op::kLt}, {">", Op::kGt}}},
            {{{"<<", Op::kShl}, {">>", Op::kShr}}},
            {{{"+", Op::kAdd}, {"-", Op::kSub}}},
            {{{"*", Op::kMul}, {"/", Op::kDiv}, {"%", Op::kMod}}},
        };
        return table;
    }

    NodePtr binary(std::size_t level) {
        if (level == levels().size()) return unary();
        NodePtr lhs = binary(level + 1);
        for (;;) {
            bool matched = false;
            for (const auto& [tok, op] : levels()[level].ops) {
                if (eat(tok)) {
                    std::vector<NodePtr> kids;
                    kids.push_back(std::move(lhs));
                    kids.push_back(binary(level + 1));
                    lhs = make(op, std::move(kids));
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    NodePtr unary() {
        for (auto [tok, op] : {std::pair{"!", Op::kNot}, {"~", Op::kBitNot}, {"-", Op::kNeg}}) {
            if (eat(tok)) {
                std::vector<NodePtr> kids;
                kids.push_back(unary());
                return make(op, std::move(kids));
            }
        }
        return primary();
    }

    NodePtr primary() {
        skip();
        if (eat("(")) {
            NodePtr n = ternary();
            expect(")");
            return n;
        }
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t end = pos_;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
            std::uint64_t v = 0;
            if (!detail::parse_u64(text_.substr(pos_, end - pos_), v)) fail("bad number");
            pos_ = end;
            return leaf(Op::kConst, v);
        }
        std::size_t end = pos_;
        while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
        const std::string_view word = text_.substr(pos_, end - pos_);
        if (word.empty()) fail("expected an operand");
        pos_ = end;
        if (word == "x") return leaf(Op::kVarX);
        if (word == "y") return leaf(Op::kVarY);
        if (word == "t") return leaf(Op::kVarT);
        if (word == "loop") return leaf(Op::kLoop);
        if (word == "min" || word == "max") {
            expect("(");
            std::vector<NodePtr> kids;
            kids.push_back(ternary());
            expect(",");
            kids.push_back(ternary());
            expect(")");
            return make(word == "min" ? Op::kMin : Op::kMax, std::move(kids));
        }
        fail("unknown name '" + std::string(word) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<std::uint64_t> eval(const Node& n, const ProgramInput& in, std::uint64_t& fuel) {
    if (fuel == 0) return std::nullopt;
    --fuel;
    auto kid = [&](std::size_t i) { return eval(*n.kids[i], in, fuel); };
    switch (n.op) {
        case Op::kConst: return n.value;
        case Op::kVarX: return in.x;
        case Op::kVarY: return in.y;
        case Op::kVarT: return in.t;
        case Op::kLoop: fuel = 0; return std::nullopt;
        case Op::kCond: {
            auto c = kid(0);
            if (!c) return std::nullopt;
            return *c ? kid(1) : kid(2);
        }
        case Op::kLogAnd: {
            auto a = kid(0);
            if (!a) return std::nullopt;
            if (!*a) return 0;
            auto b = kid(1);
            if (!b) return std::nullopt;
            return *b ? 1 : 0;
        }
        case Op::kLogOr: {
            auto a = kid(0);
            if (!a) return std::nullopt;
            if (*a) return 1;
            auto b = kid(1);
            if (!b) return std::nullopt;
            return *b ? 1 : 0;
        }
        default: break;
    }
    auto a = kid(0);
    if (!a) return std::nullopt;
    switch (n.op) {
        case Op::kNot: return *a ? 0 : 1;
        case Op::kBitNot: return ~*a;
        case Op::kNeg: return 0 - *a;
        default: break;
    }
    auto b = kid(1);
    if (!b) return std::nullopt;
    const std::uint64_t x = *a, y = *b;
    switch (n.op) {
        case Op::kAdd: return x + y;
        case Op::kSub: return x - y;
        case Op::kMul: return x * y;
        case Op::kDiv: if (y == 0) return std::nullopt; return x / y;
        case Op::kMod: if (y == 0) return std::nullopt; return x % y;
        case Op::kShl: return y >= 64 ? 0 : x << y;
        case Op::kShr: return y >= 64 ? 0 : x >> y;
        case Op::kAnd: return x & y;
        case Op::kOr: return x | y;
        case Op::kXor: return x ^ y;
        case Op::kLt: return x < y;
        case Op::kLe: return x <= y;
        case Op::kGt: return x > y;
        case Op::kGe: return x >= y;
        case Op::kEq: return x == y;
        case Op::kNe: return x != y;
        case Op::kMin: return std::min(x, y);
        case Op::kMax: return std::max(x, y);
        default: break;
    }
    return std::nullopt;
}

class ExprProgram : public Program {
public:
    ExprProgram(NodePtr root, std::string text) : root_(std::move(root)), text_(std::move(text)) {}
    std::optional<std::uint64_t> eval(const ProgramInput& in, std::uint64_t& fuel) const override {
        return dialectic::eval(*root_, in, fuel);
    }
    std::string describe() const override { return "expr " + text_; }

private:
    NodePtr root_;
    std::string text_;
};

class TableProgram : public Program {
public:
    TableProgram(std::map<std::uint64_t, std::uint64_t> table, std::unique_ptr<Program> fallback,
                 std::string text)
        : table_(std::move(table)), fallback_(std::move(fallback)), text_(std::move(text)) {}
    std::optional<std::uint64_t> eval(const ProgramInput& in, std::uint64_t& fuel) const override {
        if (fuel == 0) return std::nullopt;
        --fuel;
        if (auto it = table_.find(in.x); it != table_.end()) return it->second;
        if (!fallback_) {
            fuel = 0;
            return std::nullopt;
        }
        return fallback_->eval(in, fuel);
    }
    std::string describe() const override { return "table " + text_; }

private:
    std::map<std::uint64_t, std::uint64_t> table_;
    std::unique_ptr<Program> fallback_;
    std::string text_;
};

class RulesProgram : public Program {
public:
    explicit RulesProgram(RuleTable rules) : rules_(std::move(rules)) {}
    std::optional<std::uint64_t> eval(const ProgramInput& in, std::uint64_t& fuel) const override {
        // Coded form: only meaningful for sets inside the code range.
        if (fuel == 0) return std::nullopt;
        --fuel;
        CodedSet X = pi_decode(in.x);
        CodedSet out = X;
        for (const auto& s : evaluate(rules_, in.t, X.axioms)) {
            if (s.is_counterexample()) out.ce = true;
            else if (s.is_axiom()) out.axioms.insert(s.axiom());
        }
        if (!pi_encodable(out.axioms)) return std::nullopt;
        return pi_encode(out);
    }
    const RuleTable* rules() const override { return &rules_; }
    std::string describe() const override { return "cerules (" + std::to_string(rules_.size()) + " rules)"; }

private:
    RuleTable rules_;
};

}  // namespace

std::unique_ptr<Program> parse_expr_program(std::string_view text) {
    Parser p(text);
    NodePtr root = p.parse();
    return std::make_unique<ExprProgram>(std::move(root), std::string(text));
}

std::unique_ptr<Program> parse_table_program(std::string_view text) {
    std::map<std::uint64_t, std::uint64_t> table;
    std::unique_ptr<Program> fallback;
    const auto words = detail::split_words(text);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string_view w = words[i].text;
        if (w == "else") {
            const std::size_t start = static_cast<std::size_t>(words[i].text.data() - text.data()) + 4;
            fallback = parse_expr_program(text.substr(start));
            break;
        }
        const std::size_t colon = w.find(':');
        std::uint64_t k = 0, v = 0;
        if (colon == std::string_view::npos || !detail::parse_u64(w.substr(0, colon), k) ||
            !detail::parse_u64(w.substr(colon + 1), v)) {
            throw ParseError(1, words[i].column, "expected k:v, got '" + std::string(w) + "'");
        }
        table[k] = v;
    }
    return std::make_unique<TableProgram>(std::move(table), std::move(fallback), std::string(text));
}

std::unique_ptr<Program> make_rules_program(RuleTable rules) {
    return std::make_unique<RulesProgram>(std::move(rules));
}

}  // namespace dialectic
