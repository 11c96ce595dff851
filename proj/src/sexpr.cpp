#include "relkanren/sexpr.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

namespace relkanren {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class TokenKind { kOpen, kClose, kDot, kString, kAtom, kEnd };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_delimiter(char c) {
  return c == '(' || c == ')' || c == '"' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    if (pos_ >= text_.size()) return {TokenKind::kEnd, "", line_, col_};
    std::size_t line = line_, col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      return {TokenKind::kOpen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return {TokenKind::kClose, ")", line, col};
    }
    if (c == '"') return read_string(line, col);
    std::string word;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) {
      word.push_back(text_[pos_]);
      advance();
    }
    if (word == ".") return {TokenKind::kDot, word, line, col};
    return {TokenKind::kAtom, std::move(word), line, col};
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  Token read_string(std::size_t line, std::size_t col) {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
      char c = text_[pos_];
      advance();
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
      std::size_t esc_line = line_, esc_col = col_ - 1;
      char e = text_[pos_];
      advance();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '\\': out.push_back('\\'); break;
        case '"': out.push_back('"'); break;
        default: throw ParseError(std::string("unknown escape \\") + e, esc_line, esc_col);
      }
    }
    return {TokenKind::kString, std::move(out), line, col};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

bool is_integer_text(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::optional<double> decimal_value(std::string_view s) {
  if (s == "+inf.0") return std::numeric_limits<double>::infinity();
  if (s == "-inf.0") return -std::numeric_limits<double>::infinity();
  if (s == "+nan.0") return std::numeric_limits<double>::quiet_NaN();
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size() || !((s[i] >= '0' && s[i] <= '9') || s[i] == '.')) return std::nullopt;
  std::string_view body = s.substr(s[0] == '+' ? 1 : 0);
  double value = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size()) return std::nullopt;
  return value;
}

}  // namespace

Term SexprReader::read(std::string_view text) {
  struct Frame {
    std::vector<Term> items;
    std::optional<Term> tail;
    bool dotted = false;
    std::size_t line;
    std::size_t column;
  };

  Lexer lexer(text);
  std::vector<Frame> frames;
  std::optional<Term> result;

  auto atom_term = [this](const Token& tok) -> Term {
    const std::string& w = tok.text;
    if (w == "#t") return boolean(true);
    if (w == "#f") return boolean(false);
    if (w[0] == '?') {
      if (w.size() == 1) throw ParseError("empty variable name", tok.line, tok.column);
      if (w == "?_") return fresh_var("_");
      std::string name = w.substr(1);
      auto it = vars_.find(name);
      if (it == vars_.end()) it = vars_.emplace(name, fresh_var(name)).first;
      return it->second;
    }
    if (is_integer_text(w)) return integer(Integer(w[0] == '+' ? w.substr(1) : w));
    if (auto d = decimal_value(w)) return decimal(*d);
    return sym(w);
  };

  auto deliver = [&](Term t, const Token& tok) {
    if (frames.empty()) {
      if (result) throw ParseError("more than one term in input", tok.line, tok.column);
      result = std::move(t);
      return;
    }
    Frame& f = frames.back();
    if (f.dotted) {
      if (f.tail) throw ParseError("bad dotted pair: more than one term after '.'", tok.line, tok.column);
      f.tail = std::move(t);
    } else {
      f.items.push_back(std::move(t));
    }
  };

  while (true) {
    Token tok = lexer.next();
    switch (tok.kind) {
      case TokenKind::kEnd:
        if (!frames.empty())
          throw ParseError("unbalanced parentheses: missing ')'", frames.back().line, frames.back().column);
        if (!result) throw ParseError("empty input", tok.line, tok.column);
        return *result;
      case TokenKind::kOpen:
        frames.push_back(Frame{{}, std::nullopt, false, tok.line, tok.column});
        break;
      case TokenKind::kDot: {
        if (frames.empty() || frames.back().items.empty() || frames.back().dotted)
          throw ParseError("bad dotted pair placement", tok.line, tok.column);
        frames.back().dotted = true;
        break;
      }
      case TokenKind::kClose: {
        if (frames.empty()) throw ParseError("unbalanced parentheses: unexpected ')'", tok.line, tok.column);
        Frame f = std::move(frames.back());
        frames.pop_back();
        Term built;
        if (f.dotted) {
          if (!f.tail) throw ParseError("bad dotted pair: missing tail", tok.line, tok.column);
          built = *f.tail;
          for (auto it = f.items.rbegin(); it != f.items.rend(); ++it) built = cons(std::move(*it), std::move(built));
        } else if (!f.items.empty() && reg_->operator_of(f.items.front())) {
          built = make_expr(std::move(f.items));
        } else {
          built = term_from_list(f.items);
        }
        deliver(std::move(built), tok);
        break;
      }
      case TokenKind::kString:
        deliver(str(tok.text), tok);
        break;
      case TokenKind::kAtom:
        deliver(atom_term(tok), tok);
        break;
    }
  }
}

Term parse_sexpr(std::string_view text, const OperatorRegistry& reg) {
  SexprReader reader(reg);
  return reader.read(text);
}

namespace {

std::string decimal_text(double d) {
  if (std::isnan(d)) return "+nan.0";
  if (std::isinf(d)) return d > 0 ? "+inf.0" : "-inf.0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string string_text(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out + "\"";
}

std::string atom_text(const Atom& a) {
  if (a.is_symbol()) return a.symbol().name;
  if (a.is_integer()) return a.integer().str();
  if (a.is_decimal()) return decimal_text(a.decimal());
  if (a.is_string()) return string_text(a.string());
  return a.boolean() ? "#t" : "#f";
}

}  // namespace

std::string print_term(const Term& t) {
  // Work items: a term to print, or literal text.
  struct Item {
    std::optional<Term> term;
    std::string_view text;
  };
  std::string out;
  std::unordered_map<std::uint64_t, std::size_t> names;
  std::vector<Item> stack{{t, {}}};

  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    if (!item.term) {
      out += item.text;
      continue;
    }
    const Term& cur = *item.term;
    switch (cur.kind()) {
      case Term::Kind::kNil:
        out += "()";
        continue;
      case Term::Kind::kAtom:
        out += atom_text(cur.atom());
        continue;
      case Term::Kind::kVar: {
        auto [it, inserted] = names.try_emplace(cur.var().id, names.size());
        out += "?_" + std::to_string(it->second);
        continue;
      }
      default:
        break;
    }
    // Flatten the spine: elements, then an optional dotted tail.
    std::vector<Term> elems;
    std::optional<Term> tail;
    const Term* p = &cur;
    while (true) {
      if (p->is_cons()) {
        elems.push_back(p->cons_cell().car);
        p = &p->cons_cell().cdr;
      } else if (p->is_expr()) {
        auto items = p->expr().items();
        elems.insert(elems.end(), items.begin(), items.end());
        break;
      } else {
        if (!p->is_nil()) tail = *p;
        break;
      }
    }
    out += "(";
    stack.push_back({std::nullopt, ")"});
    if (tail) {
      stack.push_back({*tail, {}});
      stack.push_back({std::nullopt, " . "});
    }
    for (std::size_t i = elems.size(); i-- > 0;) {
      stack.push_back({elems[i], {}});
      if (i > 0) stack.push_back({std::nullopt, " "});
    }
  }
  return out;
}

}  // namespace relkanren
