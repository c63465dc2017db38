#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "probkit/conditional.hpp"
#include "probkit/errors.hpp"
#include "probkit/event_algebra.hpp"
#include "probkit/measure.hpp"
#include "probkit/rational.hpp"

namespace probkit {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class tok {
  ident,
  integer,
  lbrace,
  rbrace,
  lparen,
  rparen,
  lbracket,
  rbracket,
  comma,
  colon,
  equals,
  bar,
  amp,
  tilde,
  slash,
  end,
};

inline const char* tok_name(tok t) {
  switch (t) {
    case tok::ident: return "identifier";
    case tok::integer: return "integer";
    case tok::lbrace: return "'{'";
    case tok::rbrace: return "'}'";
    case tok::lparen: return "'('";
    case tok::rparen: return "')'";
    case tok::lbracket: return "'['";
    case tok::rbracket: return "']'";
    case tok::comma: return "','";
    case tok::colon: return "':'";
    case tok::equals: return "'='";
    case tok::bar: return "'|'";
    case tok::amp: return "'&'";
    case tok::tilde: return "'~'";
    case tok::slash: return "'/'";
    case tok::end: return "end of input";
  }
  return "?";
}

struct token {
  tok kind;
  std::string text;
  source_pos pos;
};

class lexer {
 public:
  explicit lexer(std::string_view src) : src_(src) {}

  token next() {
    skip_ws();
    source_pos pos{line_, col_};
    if (i_ >= src_.size()) return {tok::end, "", pos};
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                  src_[i_] == '_'))
        s += advance();
      return {tok::ident, s, pos};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
        s += advance();
      return {tok::integer, s, pos};
    }
    advance();
    switch (c) {
      case '{': return {tok::lbrace, "{", pos};
      case '}': return {tok::rbrace, "}", pos};
      case '(': return {tok::lparen, "(", pos};
      case ')': return {tok::rparen, ")", pos};
      case '[': return {tok::lbracket, "[", pos};
      case ']': return {tok::rbracket, "]", pos};
      case ',': return {tok::comma, ",", pos};
      case ':': return {tok::colon, ":", pos};
      case '=': return {tok::equals, "=", pos};
      case '|': return {tok::bar, "|", pos};
      case '&': return {tok::amp, "&", pos};
      case '~': return {tok::tilde, "~", pos};
      case '/': return {tok::slash, "/", pos};
      default:
        throw syntax_error(pos, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct set_expr;
using set_expr_ptr = std::shared_ptr<const set_expr>;

struct set_expr {
  enum class kind { name, literal, complement, intersect, unite };
  kind k;
  std::string id;                  // kind::name
  std::vector<std::string> elems;  // kind::literal
  set_expr_ptr lhs, rhs;           // complement uses lhs only
  source_pos pos;
};

inline bool same_structure(const set_expr& a, const set_expr& b) {
  if (a.k != b.k) return false;
  switch (a.k) {
    case set_expr::kind::name: return a.id == b.id;
    case set_expr::kind::literal: return a.elems == b.elems;
    case set_expr::kind::complement: return same_structure(*a.lhs, *b.lhs);
    case set_expr::kind::intersect:
    case set_expr::kind::unite:
      return same_structure(*a.lhs, *b.lhs) && same_structure(*a.rhs, *b.rhs);
  }
  return false;
}

struct query_ast {
  enum class kind { prob, cond_prob, predicate };
  kind k;
  set_expr_ptr left, right;  // prob uses left; cond_prob uses both
  std::string pred;          // indep | mutindep | pme | partition | sigma
  std::vector<set_expr_ptr> args;
};

inline bool same_structure(const query_ast& a, const query_ast& b) {
  if (a.k != b.k) return false;
  switch (a.k) {
    case query_ast::kind::prob:
      return same_structure(*a.left, *b.left);
    case query_ast::kind::cond_prob:
      return same_structure(*a.left, *b.left) && same_structure(*a.right, *b.right);
    case query_ast::kind::predicate: {
      if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_structure(*a.args[i], *b.args[i])) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

// Parsed .prob file: a space with exact weights, named events, and named
// partitions.
struct space_file {
  std::string name;
  sample_space space;
  probability_measure measure;
  std::vector<std::pair<std::string, event>> events;  // declaration order
  std::vector<std::pair<std::string, std::vector<std::string>>> partitions;

  const event* find_event(const std::string& n) const {
    for (const auto& [name_, e] : events)
      if (name_ == n) return &e;
    return nullptr;
  }
};

namespace detail {

class parser {
 public:
  explicit parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  token expect(tok kind, const std::string& what = "") {
    if (cur_.kind != kind)
      throw syntax_error(cur_.pos, "expected " + (what.empty() ? tok_name(kind) : what) +
                                       ", got " + got());
    return take();
  }

  token take() {
    token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  const token& cur() const { return cur_; }

  std::string got() const {
    if (cur_.kind == tok::ident || cur_.kind == tok::integer) return "'" + cur_.text + "'";
    return tok_name(cur_.kind);
  }

  bool at_ident(const char* word) const { return cur_.kind == tok::ident && cur_.text == word; }

  // RATIONAL = INT [ "/" INT ]
  rational parse_rational_tokens() {
    token num = expect(tok::integer, "a rational");
    std::string text = num.text;
    if (cur_.kind == tok::slash) {
      take();
      token den = expect(tok::integer, "a denominator");
      text += "/" + den.text;
    }
    try {
      return probkit::parse_rational(text);
    } catch (const std::invalid_argument& ex) {
      throw syntax_error(num.pos, std::string("bad rational: ") + ex.what());
    }
  }

  // set-expr = term { "|" term } ; with top_bar_stops set, a '|' at depth 0
  // is left for the caller (the conditional bar inside P(...)).
  set_expr_ptr parse_set_expr(bool top_bar_stops) {
    set_expr_ptr e = parse_term(top_bar_stops);
    while (cur_.kind == tok::bar && !top_bar_stops) {
      source_pos pos = cur_.pos;
      take();
      set_expr_ptr r = parse_term(false);
      auto n = std::make_shared<set_expr>();
      n->k = set_expr::kind::unite;
      n->lhs = e;
      n->rhs = r;
      n->pos = pos;
      e = n;
    }
    return e;
  }

  set_expr_ptr parse_term(bool top_bar_stops) {
    set_expr_ptr e = parse_factor(top_bar_stops);
    while (cur_.kind == tok::amp) {
      source_pos pos = cur_.pos;
      take();
      set_expr_ptr r = parse_factor(top_bar_stops);
      auto n = std::make_shared<set_expr>();
      n->k = set_expr::kind::intersect;
      n->lhs = e;
      n->rhs = r;
      n->pos = pos;
      e = n;
    }
    return e;
  }

  set_expr_ptr parse_factor(bool top_bar_stops) {
    auto n = std::make_shared<set_expr>();
    n->pos = cur_.pos;
    switch (cur_.kind) {
      case tok::tilde:
        take();
        n->k = set_expr::kind::complement;
        n->lhs = parse_factor(top_bar_stops);
        return n;
      case tok::ident:
        n->k = set_expr::kind::name;
        n->id = take().text;
        return n;
      case tok::lbrace: {
        take();
        n->k = set_expr::kind::literal;
        if (cur_.kind != tok::rbrace) {
          n->elems.push_back(expect(tok::ident, "an outcome label").text);
          while (cur_.kind == tok::comma) {
            take();
            n->elems.push_back(expect(tok::ident, "an outcome label").text);
          }
        }
        expect(tok::rbrace);
        return n;
      }
      case tok::lparen: {
        take();
        set_expr_ptr inner = parse_set_expr(false);
        expect(tok::rparen);
        return inner;
      }
      default:
        throw syntax_error(cur_.pos,
                           "expected '~', identifier, '{' or '(', got " + got());
    }
  }

  lexer lex_;
  token cur_;
};

inline const std::vector<std::string>& predicate_names() {
  static const std::vector<std::string> names = {"indep", "mutindep", "pme", "partition",
                                                 "sigma"};
  return names;
}

}  // namespace detail

inline space_file parse_space_file(std::string_view text) {
  detail::parser p(text);
  if (!p.at_ident("space"))
    throw syntax_error(p.cur().pos, "expected 'space', got " + p.got());
  p.take();
  std::string space_name = p.expect(tok::ident, "a space name").text;
  p.expect(tok::lbrace);

  std::vector<std::string> labels;
  std::vector<rational> weights;
  std::vector<source_pos> label_pos;
  auto parse_outcome = [&] {
    token name = p.expect(tok::ident, "an outcome label");
    for (const auto& l : labels)
      if (l == name.text)
        throw error(errc::duplicate_name,
                    std::to_string(name.pos.line) + ":" + std::to_string(name.pos.col) +
                        ": duplicate outcome label '" + name.text + "'");
    p.expect(tok::colon);
    labels.push_back(name.text);
    label_pos.push_back(name.pos);
    weights.push_back(p.parse_rational_tokens());
  };
  parse_outcome();
  while (p.cur().kind == tok::comma) {
    p.take();
    parse_outcome();
  }
  p.expect(tok::rbrace);

  sample_space space(labels);
  axiom_report rep = validate_weights(space, weights);
  if (!rep.all_ok()) {
    std::string msg = "measure axioms violated";
    for (const auto& w : rep.witnesses) msg += "; " + w;
    throw error(errc::invalid_weight, msg);
  }
  probability_measure measure(space, weights);

  std::vector<std::pair<std::string, event>> events;
  std::vector<std::pair<std::string, std::vector<std::string>>> partitions;

  auto find_named = [&](const std::string& n) -> const event* {
    for (const auto& [name_, e] : events)
      if (name_ == n) return &e;
    return nullptr;
  };

  // Resolves a parsed set expression against outcomes and earlier events.
  std::function<event(const set_expr&)> resolve = [&](const set_expr& e) -> event {
    switch (e.k) {
      case set_expr::kind::name: {
        const event* ev = find_named(e.id);
        if (!ev)
          throw error(errc::unknown_name, std::to_string(e.pos.line) + ":" +
                                              std::to_string(e.pos.col) +
                                              ": unknown event '" + e.id + "'");
        return *ev;
      }
      case set_expr::kind::literal: {
        bitmask m(space.size());
        for (const auto& l : e.elems) {
          auto i = space.index_of(l);
          if (!i)
            throw error(errc::unknown_name, std::to_string(e.pos.line) + ":" +
                                                std::to_string(e.pos.col) +
                                                ": unknown outcome '" + l + "'");
          m.set(*i);
        }
        return space.event_from_mask(m);
      }
      case set_expr::kind::complement: return ~resolve(*e.lhs);
      case set_expr::kind::intersect: return resolve(*e.lhs) & resolve(*e.rhs);
      case set_expr::kind::unite: return resolve(*e.lhs) | resolve(*e.rhs);
    }
    throw error(errc::unknown_name, "unreachable");
  };

  while (p.cur().kind != tok::end) {
    if (p.at_ident("event")) {
      p.take();
      token name = p.expect(tok::ident, "an event name");
      if (find_named(name.text))
        throw error(errc::duplicate_name,
                    std::to_string(name.pos.line) + ":" + std::to_string(name.pos.col) +
                        ": duplicate event name '" + name.text + "'");
      p.expect(tok::equals);
      set_expr_ptr ex = p.parse_set_expr(false);
      events.emplace_back(name.text, resolve(*ex));
    } else if (p.at_ident("partition")) {
      p.take();
      token name = p.expect(tok::ident, "a partition name");
      for (const auto& [n, _] : partitions)
        if (n == name.text)
          throw error(errc::duplicate_name,
                      std::to_string(name.pos.line) + ":" + std::to_string(name.pos.col) +
                          ": duplicate partition name '" + name.text + "'");
      p.expect(tok::equals);
      p.expect(tok::lbracket);
      std::vector<std::string> block_names;
      std::vector<event> blocks;
      auto take_block = [&] {
        token b = p.expect(tok::ident, "an event name");
        const event* ev = find_named(b.text);
        if (!ev)
          throw error(errc::unknown_name, std::to_string(b.pos.line) + ":" +
                                              std::to_string(b.pos.col) +
                                              ": unknown event '" + b.text + "'");
        block_names.push_back(b.text);
        blocks.push_back(*ev);
      };
      take_block();
      while (p.cur().kind == tok::comma) {
        p.take();
        take_block();
      }
      p.expect(tok::rbracket);
      if (!is_partition(blocks))
        throw error(errc::not_a_partition,
                    std::to_string(name.pos.line) + ":" + std::to_string(name.pos.col) +
                        ": '" + name.text + "' does not partition the space");
      partitions.emplace_back(name.text, std::move(block_names));
    } else {
      throw syntax_error(p.cur().pos, "expected 'event', 'partition' or end of input, got " +
                                          p.got());
    }
  }

  return space_file{std::move(space_name), std::move(space), std::move(measure),
                    std::move(events), std::move(partitions)};
}

inline query_ast parse_query(std::string_view text) {
  detail::parser p(text);
  query_ast q;
  if (p.at_ident("P")) {
    p.take();
    p.expect(tok::lparen);
    q.left = p.parse_set_expr(true);
    if (p.cur().kind == tok::bar) {
      p.take();
      q.k = query_ast::kind::cond_prob;
      q.right = p.parse_set_expr(true);
    } else {
      q.k = query_ast::kind::prob;
    }
    p.expect(tok::rparen);
  } else if (p.cur().kind == tok::ident) {
    const auto& preds = detail::predicate_names();
    bool known = false;
    for (const auto& n : preds) known |= (n == p.cur().text);
    if (!known)
      throw syntax_error(p.cur().pos,
                         "expected 'P', 'indep', 'mutindep', 'pme', 'partition' or 'sigma', "
                         "got " + p.got());
    q.k = query_ast::kind::predicate;
    q.pred = p.take().text;
    p.expect(tok::lparen);
    q.args.push_back(p.parse_set_expr(false));
    while (p.cur().kind == tok::comma) {
      p.take();
      q.args.push_back(p.parse_set_expr(false));
    }
    p.expect(tok::rparen);
  } else {
    throw syntax_error(p.cur().pos, "expected a query, got " + p.got());
  }
  p.expect(tok::end);
  return q;
}

// ---------------------------------------------------------------------------
// Formatter (canonical; format o parse is the identity on ASTs)
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(const set_expr& e) {
  switch (e.k) {
    case set_expr::kind::unite: return 1;
    case set_expr::kind::intersect: return 2;
    case set_expr::kind::complement: return 3;
    default: return 4;
  }
}

inline std::string format_set(const set_expr& e, int min_prec) {
  std::string s;
  switch (e.k) {
    case set_expr::kind::name:
      s = e.id;
      break;
    case set_expr::kind::literal: {
      s = "{";
      for (std::size_t i = 0; i < e.elems.size(); ++i) {
        if (i) s += ",";
        s += e.elems[i];
      }
      s += "}";
      break;
    }
    case set_expr::kind::complement:
      s = "~" + format_set(*e.lhs, 3);
      break;
    case set_expr::kind::intersect:
      s = format_set(*e.lhs, 2) + " & " + format_set(*e.rhs, 3);
      break;
    case set_expr::kind::unite:
      s = format_set(*e.lhs, 1) + " | " + format_set(*e.rhs, 2);
      break;
  }
  if (precedence(e) < min_prec) return "(" + s + ")";
  return s;
}

}  // namespace detail

inline std::string format_query(const query_ast& q) {
  switch (q.k) {
    case query_ast::kind::prob:
      return "P(" + detail::format_set(*q.left, 2) + ")";
    case query_ast::kind::cond_prob:
      // Operands of the conditional bar must not expose a top-level union.
      return "P(" + detail::format_set(*q.left, 2) + " | " +
             detail::format_set(*q.right, 2) + ")";
    case query_ast::kind::predicate: {
      std::string s = q.pred + "(";
      for (std::size_t i = 0; i < q.args.size(); ++i) {
        if (i) s += ", ";
        s += detail::format_set(*q.args[i], 1);
      }
      return s + ")";
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

struct eval_result {
  enum class type { number, boolean };
  type t = type::number;
  rational num;
  bool flag = false;
  std::string detail;  // extra report text (sigma/mutindep witnesses)
};

inline event resolve_set_expr(const space_file& sf, const set_expr& e) {
  switch (e.k) {
    case set_expr::kind::name: {
      const event* ev = sf.find_event(e.id);
      if (!ev)
        throw error(errc::unknown_name, std::to_string(e.pos.line) + ":" +
                                            std::to_string(e.pos.col) + ": unknown event '" +
                                            e.id + "'");
      return *ev;
    }
    case set_expr::kind::literal: {
      bitmask m(sf.space.size());
      for (const auto& l : e.elems) {
        auto i = sf.space.index_of(l);
        if (!i)
          throw error(errc::unknown_name, std::to_string(e.pos.line) + ":" +
                                              std::to_string(e.pos.col) +
                                              ": unknown outcome '" + l + "'");
        m.set(*i);
      }
      return sf.space.event_from_mask(m);
    }
    case set_expr::kind::complement: return ~resolve_set_expr(sf, *e.lhs);
    case set_expr::kind::intersect:
      return resolve_set_expr(sf, *e.lhs) & resolve_set_expr(sf, *e.rhs);
    case set_expr::kind::unite:
      return resolve_set_expr(sf, *e.lhs) | resolve_set_expr(sf, *e.rhs);
  }
  throw error(errc::unknown_name, "unreachable");
}

inline eval_result eval_query(const space_file& sf, const query_ast& q) {
  eval_result res;
  switch (q.k) {
    case query_ast::kind::prob:
      res.t = eval_result::type::number;
      res.num = sf.measure.prob(resolve_set_expr(sf, *q.left));
      return res;
    case query_ast::kind::cond_prob:
      res.t = eval_result::type::number;
      res.num = cond_prob(sf.measure, resolve_set_expr(sf, *q.left),
                          resolve_set_expr(sf, *q.right));
      return res;
    case query_ast::kind::predicate: {
      std::vector<event> args;
      args.reserve(q.args.size());
      for (const auto& a : q.args) args.push_back(resolve_set_expr(sf, *a));
      res.t = eval_result::type::boolean;
      if (q.pred == "indep") {
        if (args.size() != 2)
          throw error(errc::length_mismatch,
                      "indep takes exactly 2 arguments, got " + std::to_string(args.size()));
        res.flag = is_independent(sf.measure, args[0], args[1]);
      } else if (q.pred == "mutindep") {
        auto mi = is_mutually_independent(sf.measure, args);
        res.flag = mi.ok;
        if (!mi.ok) {
          res.detail = "violating subset indices:";
          for (auto i : mi.violating_subset) res.detail += " " + std::to_string(i);
        }
      } else if (q.pred == "pme") {
        res.flag = is_pme_family(args);
      } else if (q.pred == "partition") {
        res.flag = is_partition(args);
      } else if (q.pred == "sigma") {
        auto sc = is_sigma_algebra(sf.space, args);
        res.flag = sc.ok;
        res.detail = sc.violation;
      }
      return res;
    }
  }
  return res;
}

}  // namespace probkit
