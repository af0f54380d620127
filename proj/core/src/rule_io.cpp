#include "toeplitz/rule_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace toeplitz {

namespace {

struct Line {
  int number = 0;
  std::string key;                  // before ':' or before '{'
  std::vector<std::string> values;  // whitespace-split after ':'
  bool opens_block = false;
  bool closes_block = false;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;

    Line line;
    line.number = number;
    if (toks.size() == 1 && toks[0] == "}") {
      line.closes_block = true;
    } else if (toks.back() == "{") {
      if (toks.size() != 2)
        throw ParseError(number, "block header must be '<name> {'");
      line.key = toks[0];
      line.opens_block = true;
    } else if (!toks[0].empty() && toks[0].back() == ':') {
      line.key = toks[0].substr(0, toks[0].size() - 1);
      line.values.assign(toks.begin() + 1, toks.end());
    } else {
      throw ParseError(number, fmt::format("cannot parse '{}'", raw));
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::int64_t parse_int(const Line& line, const std::string& tok) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line.number, fmt::format("expected integer, got '{}'", tok));
  }
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lines_(tokenize(text)) {}

  SequenceRule parse() {
    // Top level: alphabet first, then the rule body.
    std::optional<Alphabet> alphabet;
    if (!done() && peek().key == "alphabet") {
      const Line& line = next();
      if (line.values.empty())
        throw ParseError(line.number, "alphabet needs at least one label");
      alphabet = Alphabet(line.values);
    }
    if (!alphabet) {
      throw ParseError(done() ? 0 : peek().number,
                       "file must start with 'alphabet: <labels>'");
    }
    SequenceRule rule = parse_rule_body(*alphabet);
    if (!done())
      throw ParseError(peek().number, "trailing content after the rule");
    return rule;
  }

 private:
  bool done() const { return pos_ >= lines_.size(); }
  const Line& peek() const { return lines_[pos_]; }
  const Line& next() { return lines_[pos_++]; }

  const Line& expect_key(const std::string& key) {
    if (done())
      throw ParseError(0, fmt::format("unexpected end of file, wanted '{}'", key));
    const Line& line = next();
    if (line.key != key || line.opens_block || line.closes_block)
      throw ParseError(line.number, fmt::format("expected '{}:'", key));
    return line;
  }

  SymbolId symbol(const Alphabet& alphabet, const Line& line,
                  const std::string& label) {
    try {
      return alphabet.id_of(label);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line.number, e.what());
    }
  }

  SequenceRule parse_rule_body(const Alphabet& alphabet) {
    const Line& kind_line = expect_key("kind");
    if (kind_line.values.size() != 1)
      throw ParseError(kind_line.number, "kind takes exactly one value");
    const std::string& kind = kind_line.values[0];

    try {
      if (kind == "constant") return parse_constant(alphabet);
      if (kind == "periodic") return parse_periodic(alphabet);
      if (kind == "toeplitz_fill") return parse_fill(alphabet);
      if (kind == "substitution") return parse_substitution(alphabet);
      if (kind == "shift_of") return parse_shift(alphabet);
      if (kind == "splice") return parse_splice(alphabet);
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const ParseError*>(&e)) throw;
      // Rule validation failure: attach the kind line for context.
      throw ParseError(kind_line.number, e.what());
    }
    throw ParseError(kind_line.number,
                     fmt::format("unknown rule kind '{}'", kind));
  }

  SequenceRule parse_constant(const Alphabet& alphabet) {
    const Line& line = expect_key("symbol");
    if (line.values.size() != 1)
      throw ParseError(line.number, "symbol takes exactly one label");
    return SequenceRule::constant(alphabet, symbol(alphabet, line, line.values[0]));
  }

  SequenceRule parse_periodic(const Alphabet& alphabet) {
    const Line& line = expect_key("pattern");
    std::vector<SymbolId> pat;
    for (const auto& label : line.values)
      pat.push_back(symbol(alphabet, line, label));
    return SequenceRule::periodic(alphabet, std::move(pat));
  }

  SequenceRule parse_fill(const Alphabet& alphabet) {
    std::vector<FillStage> stages;
    while (!done() && peek().key == "stage" && !peek().opens_block) {
      const Line& line = next();
      if (line.values.size() != 3)
        throw ParseError(line.number, "stage: <period> <residue> <label>");
      FillStage st;
      st.period = parse_int(line, line.values[0]);
      st.residue = parse_int(line, line.values[1]);
      st.symbol = symbol(alphabet, line, line.values[2]);
      stages.push_back(st);
    }
    return SequenceRule::toeplitz_fill(alphabet, std::move(stages));
  }

  SequenceRule parse_substitution(const Alphabet& alphabet) {
    std::vector<std::vector<SymbolId>> rules(alphabet.size());
    std::vector<bool> given(alphabet.size(), false);
    while (!done() && peek().key == "rule") {
      const Line& line = next();
      if (line.values.size() < 3 || line.values[1] != "=>")
        throw ParseError(line.number, "rule: <label> => <label>...");
      const SymbolId lhs = symbol(alphabet, line, line.values[0]);
      std::vector<SymbolId> image;
      for (std::size_t i = 2; i < line.values.size(); ++i)
        image.push_back(symbol(alphabet, line, line.values[i]));
      rules[lhs] = std::move(image);
      given[lhs] = true;
    }
    for (std::size_t s = 0; s < given.size(); ++s)
      if (!given[s])
        throw ParseError(done() ? 0 : peek().number,
                         fmt::format("missing rule for symbol '{}'",
                                     alphabet.label(static_cast<SymbolId>(s))));
    const Line& seed_line = expect_key("seed");
    const SymbolId seed = symbol(alphabet, seed_line, seed_line.values.at(0));
    const Line& left_line = expect_key("left_seed");
    const SymbolId left = symbol(alphabet, left_line, left_line.values.at(0));
    return SequenceRule::substitution(alphabet, std::move(rules), seed, left);
  }

  SequenceRule parse_shift(const Alphabet& alphabet) {
    const Line& off_line = expect_key("offset");
    if (off_line.values.size() != 1)
      throw ParseError(off_line.number, "offset takes exactly one integer");
    const std::int64_t off = parse_int(off_line, off_line.values[0]);
    open_block("base");
    SequenceRule base = parse_rule_body(alphabet);
    close_block();
    return SequenceRule::shift_of(std::move(base), off);
  }

  SequenceRule parse_splice(const Alphabet& alphabet) {
    std::vector<SkeletonMap> skeletons;
    std::optional<SequenceRule> filler;
    while (!done() && peek().opens_block) {
      if (peek().key == "skeleton") {
        next();
        skeletons.push_back(parse_skeleton(alphabet));
        close_block();
      } else if (peek().key == "filler") {
        next();
        filler = parse_rule_body(alphabet);
        close_block();
      } else {
        throw ParseError(peek().number,
                         fmt::format("unexpected block '{}'", peek().key));
      }
    }
    return SequenceRule::splice(alphabet, std::move(skeletons),
                                std::move(filler));
  }

  SkeletonMap parse_skeleton(const Alphabet& alphabet) {
    const Line& p_line = expect_key("period");
    const std::int64_t p = parse_int(p_line, p_line.values.at(0));
    if (p < 1) throw ParseError(p_line.number, "period must be positive");
    SkeletonMap sk(p, 0);
    while (!done() && !peek().closes_block) {
      const Line& line = next();
      if (line.key == "radius") {
        sk.evidence_radius = parse_int(line, line.values.at(0));
      } else if (line.key == "entry") {
        if (line.values.size() != 2)
          throw ParseError(line.number, "entry: <residue> <label>");
        const std::int64_t r = parse_int(line, line.values[0]);
        if (r < 0 || r >= p)
          throw ParseError(line.number,
                           fmt::format("residue {} out of range mod {}", r, p));
        sk.slots[static_cast<std::size_t>(r)] =
            symbol(alphabet, line, line.values[1]);
      } else {
        throw ParseError(line.number,
                         fmt::format("unexpected key '{}' in skeleton", line.key));
      }
    }
    return sk;
  }

  void open_block(const std::string& name) {
    if (done())
      throw ParseError(0, fmt::format("unexpected end of file, wanted '{} {{'", name));
    const Line& line = next();
    if (!line.opens_block || line.key != name)
      throw ParseError(line.number, fmt::format("expected '{} {{'", name));
  }

  void close_block() {
    if (done()) throw ParseError(0, "unexpected end of file, wanted '}'");
    const Line& line = next();
    if (!line.closes_block) throw ParseError(line.number, "expected '}'");
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

void serialize_body(const SequenceRule& rule, std::string& out,
                    const std::string& indent) {
  const Alphabet& ab = rule.alphabet();
  out += fmt::format("{}kind: {}\n", indent, to_string(rule.kind()));
  switch (rule.kind()) {
    case RuleKind::constant:
      out += fmt::format("{}symbol: {}\n", indent, ab.label(rule.constant_value()));
      break;
    case RuleKind::periodic: {
      out += indent + "pattern:";
      for (SymbolId s : rule.pattern()) out += " " + ab.label(s);
      out += "\n";
      break;
    }
    case RuleKind::toeplitz_fill:
      for (const auto& st : rule.stages())
        out += fmt::format("{}stage: {} {} {}\n", indent, st.period, st.residue,
                           ab.label(st.symbol));
      break;
    case RuleKind::substitution: {
      const auto& rules = rule.substitution_rules();
      for (std::size_t s = 0; s < rules.size(); ++s) {
        out += fmt::format("{}rule: {} =>", indent,
                           ab.label(static_cast<SymbolId>(s)));
        for (SymbolId t : rules[s]) out += " " + ab.label(t);
        out += "\n";
      }
      out += fmt::format("{}seed: {}\n", indent, ab.label(rule.seed()));
      out += fmt::format("{}left_seed: {}\n", indent, ab.label(rule.left_seed()));
      break;
    }
    case RuleKind::shift_of:
      out += fmt::format("{}offset: {}\n", indent, rule.offset());
      out += indent + "base {\n";
      serialize_body(rule.base(), out, indent + "  ");
      out += indent + "}\n";
      break;
    case RuleKind::splice: {
      for (const auto& sk : rule.layers()) {
        out += indent + "skeleton {\n";
        out += fmt::format("{}  period: {}\n", indent, sk.period);
        if (sk.evidence_radius != 0)
          out += fmt::format("{}  radius: {}\n", indent, sk.evidence_radius);
        for (std::int64_t r = 0; r < sk.period; ++r) {
          if (const auto s = sk.slots[static_cast<std::size_t>(r)])
            out += fmt::format("{}  entry: {} {}\n", indent, r, ab.label(*s));
        }
        out += indent + "}\n";
      }
      if (rule.filler()) {
        out += indent + "filler {\n";
        serialize_body(*rule.filler(), out, indent + "  ");
        out += indent + "}\n";
      }
      break;
    }
  }
}

}  // namespace

SequenceRule parse_rule(const std::string& text) {
  return Parser(text).parse();
}

SequenceRule load_rule_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument(
        fmt::format("cannot open sequence file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule(buf.str());
}

std::string serialize_rule(const SequenceRule& rule) {
  std::string out = "alphabet:";
  for (const auto& label : rule.alphabet().labels()) out += " " + label;
  out += "\n";
  serialize_body(rule, out, "");
  return out;
}

void save_rule_file(const std::filesystem::path& path, const SequenceRule& rule) {
  std::ofstream out(path);
  if (!out)
    throw std::invalid_argument(
        fmt::format("cannot write sequence file '{}'", path.string()));
  out << serialize_rule(rule);
}

}  // namespace toeplitz
