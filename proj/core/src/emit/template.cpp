#include "netcarta/emit/template.hpp"

#include <variant>

#include "netcarta/error.hpp"

namespace netcarta::emit {

namespace ast {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  std::string value;
};

struct Accessor {
  std::string root;                   // "$n", "$e", "$c", ...
  std::vector<std::string> segments;  // the dotted path after the root
  std::string text;
};

struct Call {
  std::string function;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<Literal, Accessor, Call> value;
};

struct Text {
  std::string value;
};
struct Interpolate {
  ExprPtr expr;
  int line = 0;
};
struct If {
  ExprPtr condition;
  std::shared_ptr<const Block> then_block;
  std::shared_ptr<const Block> else_block;
  int line = 0;
};
struct Range {
  std::shared_ptr<const Block> body;
  int line = 0;
};
struct Handled {};

using Node = std::variant<Text, Interpolate, If, Range, Handled>;

struct Block {
  std::vector<Node> nodes;
};

}  // namespace ast

namespace {

using namespace ast;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, std::string_view source, int line)
      : text_(text), source_(source), line_(line) {}

  ExprPtr parse_all() {
    auto expr = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_)) + "'");
    return expr;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(std::string(source_) + ":" + std::to_string(line_) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }

  std::string_view word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != '"') {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  ExprPtr parse_expr() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    const char c = text_[pos_];
    if (c == '"' || c == '$' || c == '(') return parse_operand();
    const std::size_t start = pos_;
    std::string name(word());
    if (name.empty()) fail("unexpected '" + std::string(1, text_[start]) + "'");
    Call call{name, {}};
    while (!at_end() && text_[pos_] != ')') call.args.push_back(parse_operand());
    const std::size_t n = call.args.size();
    if (name == "eq" || name == "ne") {
      if (n != 2) fail(name + " takes 2 arguments, got " + std::to_string(n));
    } else if (name == "not") {
      if (n != 1) fail("not takes 1 argument, got " + std::to_string(n));
    } else if (name == "and" || name == "or") {
      if (n < 2) fail(name + " takes at least 2 arguments");
    } else {
      fail("unknown function '" + name + "'");
    }
    return std::make_shared<const Expr>(Expr{std::move(call)});
  }

  ExprPtr parse_operand() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_expr();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (c == '"') {
      ++pos_;
      std::string value;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated string literal");
        char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= text_.size()) fail("unterminated string literal");
          ch = text_[pos_++];
          if (ch == 'n') ch = '\n';
          else if (ch == 't') ch = '\t';
          else if (ch != '"' && ch != '\\') fail(std::string("unknown escape \\") + ch);
        }
        value += ch;
      }
      return std::make_shared<const Expr>(Expr{Literal{std::move(value)}});
    }
    if (c == '$') {
      std::string text(word());
      Accessor accessor;
      accessor.text = text;
      std::size_t start = 0;
      while (true) {
        const std::size_t dot = text.find('.', start);
        std::string part = text.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) fail("malformed accessor '" + text + "'");
        if (accessor.root.empty()) {
          accessor.root = std::move(part);
        } else {
          accessor.segments.push_back(std::move(part));
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
      }
      if (accessor.root.size() < 2) fail("malformed accessor '" + text + "'");
      return std::make_shared<const Expr>(Expr{std::move(accessor)});
    }
    fail("expected an accessor, string literal or '(' but found '" +
         std::string(text_.substr(pos_)) + "'");
  }

  std::string_view text_;
  std::string_view source_;
  int line_;
  std::size_t pos_ = 0;
};

struct Frame {
  enum class Kind { root, if_then, if_else, range } kind;
  std::shared_ptr<Block> block;
  std::shared_ptr<Block> then_block;  // for if_else: the completed then branch
  ExprPtr condition;
  int line = 0;
};

std::shared_ptr<const Block> parse_body(std::string_view text, std::string_view source) {
  auto fail = [&](int line, const std::string& message) {
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + message);
  };
  std::vector<Frame> stack;
  stack.push_back({Frame::Kind::root, std::make_shared<Block>(), nullptr, nullptr, 1});

  int line = 1;
  std::size_t pos = 0;
  auto advance_to = [&](std::size_t target) {
    for (std::size_t i = pos; i < target; ++i) line += text[i] == '\n' ? 1 : 0;
    pos = target;
  };

  while (pos < text.size()) {
    const std::size_t open = text.find("{{", pos);
    const std::size_t text_end = open == std::string_view::npos ? text.size() : open;
    if (text_end > pos) {
      stack.back().block->nodes.emplace_back(Text{std::string(text.substr(pos, text_end - pos))});
    }
    advance_to(text_end);
    if (open == std::string_view::npos) break;

    const int action_line = line;
    const std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) fail(action_line, "unclosed '{{'");
    const std::string_view action = trim(text.substr(open + 2, close - open - 2));
    advance_to(close + 2);

    if (action.empty()) fail(action_line, "empty action");
    const std::size_t space = action.find_first_of(" \t\r\n");
    const std::string_view keyword = action.substr(0, space);
    const std::string_view rest =
        space == std::string_view::npos ? std::string_view{} : trim(action.substr(space));

    if (keyword == "if") {
      if (rest.empty()) fail(action_line, "if needs a condition");
      auto condition = ExprParser(rest, source, action_line).parse_all();
      stack.push_back({Frame::Kind::if_then, std::make_shared<Block>(), nullptr, condition,
                       action_line});
    } else if (keyword == "else") {
      if (!rest.empty()) fail(action_line, "else takes no arguments");
      if (stack.back().kind != Frame::Kind::if_then) fail(action_line, "else without if");
      Frame& frame = stack.back();
      frame.then_block = frame.block;
      frame.block = std::make_shared<Block>();
      frame.kind = Frame::Kind::if_else;
    } else if (keyword == "end") {
      if (!rest.empty()) fail(action_line, "end takes no arguments");
      if (stack.size() == 1) fail(action_line, "end without if or range");
      Frame frame = std::move(stack.back());
      stack.pop_back();
      if (frame.kind == Frame::Kind::range) {
        stack.back().block->nodes.emplace_back(Range{frame.block, frame.line});
      } else if (frame.kind == Frame::Kind::if_then) {
        stack.back().block->nodes.emplace_back(If{frame.condition, frame.block, nullptr, frame.line});
      } else {
        stack.back().block->nodes.emplace_back(
            If{frame.condition, frame.then_block, frame.block, frame.line});
      }
    } else if (keyword == "range") {
      if (rest != "$e") fail(action_line, "range only supports '$e' (the node's edges)");
      stack.push_back({Frame::Kind::range, std::make_shared<Block>(), nullptr, nullptr, action_line});
    } else if (keyword == "handled") {
      if (!rest.empty()) fail(action_line, "handled takes no arguments");
      stack.back().block->nodes.emplace_back(Handled{});
    } else {
      stack.back().block->nodes.emplace_back(
          Interpolate{ExprParser(action, source, action_line).parse_all(), action_line});
    }
  }
  if (stack.size() > 1) {
    const Frame& open_frame = stack.back();
    fail(open_frame.line, std::string(open_frame.kind == Frame::Kind::range ? "range" : "if") +
                              " is missing its end");
  }
  return stack.front().block;
}

struct EdgeBinding {
  const Edge* edge = nullptr;
  std::size_t index = 0;
};

class Renderer {
 public:
  explicit Renderer(const RenderContext& context) : context_(context) {}

  void block(const Block& b, std::optional<EdgeBinding> edge) {
    for (const Node& node : b.nodes) {
      std::visit([&](const auto& n) { visit(n, edge); }, node);
    }
  }

  std::string out;
  bool handled = false;

 private:
  void visit(const Text& t, const std::optional<EdgeBinding>&) { out += t.value; }
  void visit(const Interpolate& i, const std::optional<EdgeBinding>& edge) {
    out += eval(*i.expr, edge);
  }
  void visit(const If& i, const std::optional<EdgeBinding>& edge) {
    if (!eval(*i.condition, edge).empty()) {
      block(*i.then_block, edge);
    } else if (i.else_block) {
      block(*i.else_block, edge);
    }
  }
  void visit(const Range& r, const std::optional<EdgeBinding>& edge) {
    if (!context_.node) throw RenderError("range $e needs a node");
    const auto& edges = context_.node->edges;
    for (std::size_t k = 0; k < edges.size(); ++k) block(*r.body, EdgeBinding{&edges[k], k});
    (void)edge;
  }
  void visit(const Handled&, const std::optional<EdgeBinding>&) { handled = true; }

  static std::string from_map(const MetadataMap& map, const std::vector<std::string>& path,
                              std::size_t from) {
    std::string key;
    for (std::size_t k = from; k < path.size(); ++k) {
      if (!key.empty()) key += '.';
      key += path[k];
    }
    return std::string(lookup(map, key));
  }

  [[noreturn]] static void bad(const Accessor& a) {
    throw RenderError("unknown accessor '" + a.text + "'");
  }

  std::string network_field(Id nid, const Accessor& a, std::size_t from) const {
    const auto& s = a.segments;
    if (s.size() == from + 1 && s[from] == "NID") return nid.to_string();
    if (s.size() <= from + 1 || s[from] != "D") bad(a);
    if (!context_.networks) return {};
    auto it = context_.networks->find(nid);
    return it == context_.networks->end() ? std::string{} : from_map(it->second.data, s, from + 1);
  }

  std::string resolve(const Accessor& a, const std::optional<EdgeBinding>& edge) const {
    const auto& s = a.segments;
    if (a.root == "$c") {
      if (s.empty()) bad(a);
      return context_.config ? from_map(*context_.config, s, 0) : std::string{};
    }
    if (a.root == "$n") {
      if (!context_.node) throw RenderError("'" + a.text + "' used without a node");
      if (s.size() == 1 && s[0] == "NID") return context_.node->nid.to_string();
      if (s.size() >= 2 && s[0] == "D") return from_map(context_.node->data, s, 1);
      bad(a);
    }
    if (a.root == "$e") {
      if (!edge) throw RenderError("'" + a.text + "' used outside range $e");
      if (s.size() == 1 && s[0] == "N") return edge->edge->network.to_string();
      if (s.size() == 1 && s[0] == "Index") return std::to_string(edge->index);
      if (s.size() >= 2 && s[0] == "D") return from_map(edge->edge->data, s, 1);
      if (s.size() >= 2 && s[0] == "Net") return network_field(edge->edge->network, a, 1);
      bad(a);
    }
    throw RenderError("unknown accessor root '" + a.root + "' in '" + a.text + "'");
  }

  std::string eval(const Expr& e, const std::optional<EdgeBinding>& edge) const {
    if (auto* lit = std::get_if<Literal>(&e.value)) return lit->value;
    if (auto* acc = std::get_if<Accessor>(&e.value)) return resolve(*acc, edge);
    const auto& call = std::get<Call>(e.value);
    auto arg = [&](std::size_t k) { return eval(*call.args[k], edge); };
    auto truth = [](bool b) { return b ? std::string("true") : std::string(); };
    if (call.function == "eq") return truth(arg(0) == arg(1));
    if (call.function == "ne") return truth(arg(0) != arg(1));
    if (call.function == "not") return truth(arg(0).empty());
    if (call.function == "and") {
      std::string last;
      for (std::size_t k = 0; k < call.args.size(); ++k) {
        last = arg(k);
        if (last.empty()) return last;
      }
      return last;
    }
    for (std::size_t k = 0; k < call.args.size(); ++k) {
      if (auto v = arg(k); !v.empty()) return v;
    }
    return {};
  }

  const RenderContext& context_;
};

}  // namespace

TemplateBody TemplateBody::parse(std::string_view text, std::string_view source) {
  TemplateBody body;
  body.root_ = parse_body(text, source);
  return body;
}

RenderResult TemplateBody::render(const RenderContext& context) const {
  Renderer renderer(context);
  if (root_) renderer.block(*root_, std::nullopt);
  return RenderResult{drop_blank_lines(renderer.out), renderer.handled};
}

std::string drop_blank_lines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    if (!trim(line).empty()) {
      out += line;
      out += '\n';
    }
    pos = nl + 1;
  }
  return out;
}

}  // namespace netcarta::emit
