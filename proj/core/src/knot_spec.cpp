#include "khss/knot_spec.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace khss {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PlanarDiagram parse() {
    PlanarDiagram d = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return d;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw KnotSpecError(message, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a knot name");
    std::string id(text_.substr(start, pos_ - start));
    for (char& ch : id) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return id;
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view token = text_.substr(start, pos_ - start);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      pos_ = start;
      fail("expected an integer");
    }
    return value;
  }

  std::vector<int> integer_list() {
    std::vector<int> out;
    expect('(');
    if (peek(')')) {
      ++pos_;
      return out;
    }
    out.push_back(integer());
    while (peek(',')) {
      ++pos_;
      out.push_back(integer());
    }
    expect(')');
    return out;
  }

  PlanarDiagram expression() {
    skip_ws();
    const std::size_t start = pos_;
    const std::string name = identifier();
    if (name == "unknot") {
      if (peek('(')) {
        ++pos_;
        expect(')');
      }
      return unknot_diagram();
    }
    if (name == "mirror") {
      expect('(');
      PlanarDiagram inner = expression();
      expect(')');
      return mirror(inner);
    }
    if (name == "torus") {
      const std::size_t args_at = pos_;
      const auto args = integer_list();
      if (args.size() != 2) {
        pos_ = args_at;
        fail("torus takes two arguments");
      }
      if (args[0] < 2 || args[1] < 2) {
        pos_ = args_at;
        fail("torus(p,q) needs p,q >= 2");
      }
      return torus_diagram(args[0], args[1]);
    }
    if (name == "pretzel") {
      const std::size_t args_at = pos_;
      const auto args = integer_list();
      if (args.size() != 3) {
        pos_ = args_at;
        fail("pretzel takes three arguments");
      }
      for (int a : args) {
        if (a == 0) {
          pos_ = args_at;
          fail("pretzel parameters must be nonzero");
        }
      }
      return pretzel_diagram(args);
    }
    if (name == "braid") {
      const std::size_t args_at = pos_;
      const auto word = integer_list();
      if (word.empty()) {
        pos_ = args_at;
        fail("empty braid word");
      }
      for (int k : word) {
        if (k == 0) {
          pos_ = args_at;
          fail("braid generators are nonzero integers");
        }
      }
      return braid_closure(word);
    }
    if (name == "pd") {
      return pd_body();
    }
    pos_ = start;
    fail("unknown knot family '" + name + "'");
  }

  PlanarDiagram pd_body() {
    expect('(');
    expect('[');
    std::vector<Crossing> tuples;
    const std::size_t at = pos_;
    if (!peek(']')) {
      tuples.push_back(tuple());
      while (peek(',')) {
        ++pos_;
        tuples.push_back(tuple());
      }
    }
    expect(']');
    expect(')');
    try {
      return diagram_from_pd(tuples);
    } catch (const DiagramError& e) {
      pos_ = at;
      fail(e.what());
    }
  }

  Crossing tuple() {
    expect('[');
    Crossing c{};
    for (int k = 0; k < 4; ++k) {
      if (k) expect(',');
      c[k] = integer();
    }
    expect(']');
    return c;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PlanarDiagram parse_knot_spec(std::string_view text) { return Parser(text).parse(); }

}  // namespace khss
