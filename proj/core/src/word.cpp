#include "selfsim/word.hpp"

#include <algorithm>
#include <cctype>

#include "selfsim/error.hpp"

namespace selfsim {

std::size_t GroupWord::hash() const noexcept {
  // FNV-1a over letter codes.
  std::size_t h = 1469598103934665603ull;
  for (const auto& l : letters_) {
    h ^= l.code() + 1;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, std::span<const std::string> names)
      : text_(text), names_(names) {
    single_char_names_ = std::all_of(names.begin(), names.end(),
                                     [](const std::string& n) { return n.size() == 1; });
  }

  std::vector<Letter> parse() {
    auto out = parse_sequence();
    skip_blanks();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::parse_error, "cannot parse word \"" + std::string(text_) + "\": " + why);
  }

  void skip_blanks() {
    while (pos_ < text_.size() &&
           (std::isspace(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '*')) {
      ++pos_;
    }
  }

  std::vector<Letter> parse_sequence() {
    std::vector<Letter> out;
    for (;;) {
      skip_blanks();
      if (pos_ >= text_.size() || text_[pos_] == ')') return out;
      auto factor = parse_factor();
      out.insert(out.end(), factor.begin(), factor.end());
    }
  }

  std::vector<Letter> parse_factor() {
    std::vector<Letter> atom;
    std::vector<Letter> head;  // split run "abc^2": the exponent binds to the last letter only
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      atom = parse_sequence();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
    } else if (c == '1' && !is_name_char(peek(1))) {
      ++pos_;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      atom = parse_name();
      if (atom.size() > 1) {
        head.assign(atom.begin(), atom.end() - 1);
        atom.erase(atom.begin(), atom.end() - 1);
      }
    } else {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      atom = power(atom, parse_int());
    }
    head.insert(head.end(), atom.begin(), atom.end());
    return head;
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  std::vector<Letter> parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (auto g = lookup(name)) return {Letter{*g, 1}};
    if (single_char_names_) {
      std::vector<Letter> out;
      for (char ch : name) {
        auto g = lookup(std::string(1, ch));
        if (!g) unknown(std::string(1, ch));
        out.push_back(Letter{*g, 1});
      }
      return out;
    }
    unknown(name);
  }

  [[noreturn]] void unknown(const std::string& name) const {
    throw Error(Errc::unknown_symbol,
                "unknown generator \"" + name + "\" in word \"" + std::string(text_) + "\"");
  }

  std::optional<std::uint16_t> lookup(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<std::uint16_t>(i);
    }
    return std::nullopt;
  }

  long parse_int() {
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000000) fail("exponent too large");
      ++pos_;
    }
    if (pos_ == start) fail("missing exponent");
    return negative ? -value : value;
  }

  static std::vector<Letter> power(const std::vector<Letter>& atom, long k) {
    std::vector<Letter> base = atom;
    if (k < 0) {
      std::reverse(base.begin(), base.end());
      for (auto& l : base) l = l.inverse();
      k = -k;
    }
    std::vector<Letter> out;
    out.reserve(base.size() * static_cast<std::size_t>(k));
    for (long i = 0; i < k; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
  bool single_char_names_ = false;
};

}  // namespace

std::vector<Letter> parse_letters(std::string_view text, std::span<const std::string> names) {
  return WordParser(text, names).parse();
}

std::string format_letters(std::span<const Letter> letters, std::span<const std::string> names) {
  if (letters.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long run = static_cast<long>(j - i) * letters[i].exp;
    if (!out.empty()) out.push_back(' ');
    out += names[letters[i].gen];
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

std::vector<std::optional<unsigned>> detect_generator_orders(
    std::size_t generator_count, std::span<const RewritingSystem::Rule> raw_rules) {
  std::vector<std::optional<unsigned>> orders(generator_count);
  for (const auto& rule : raw_rules) {
    if (!rule.rhs.empty() || rule.lhs.empty()) continue;
    const Letter first = rule.lhs.front();
    const bool uniform = std::all_of(rule.lhs.begin(), rule.lhs.end(),
                                     [&](const Letter& l) { return l.gen == first.gen; });
    if (!uniform) continue;
    long total = 0;
    for (const auto& l : rule.lhs) total += l.exp;
    const auto m = static_cast<unsigned>(total < 0 ? -total : total);
    if (m == 0) continue;
    auto& slot = orders.at(first.gen);
    if (!slot || m < *slot) slot = m;
  }
  return orders;
}

RewritingSystem::RewritingSystem(std::size_t generator_count, std::vector<Rule> rules)
    : orders_(detect_generator_orders(generator_count, rules)),
      by_last_(2 * generator_count) {
  for (auto& rule : rules) {
    Rule normal;
    for (auto l : rule.lhs) normalize_into(l, normal.lhs);
    for (auto l : rule.rhs) normalize_into(l, normal.rhs);
    if (normal.lhs.empty()) continue;
    by_last_.at(normal.lhs.back().code()).push_back(rules_.size());
    rules_.push_back(std::move(normal));
  }
}

void RewritingSystem::normalize_into(Letter x, std::vector<Letter>& out) const {
  const auto& order = orders_.at(x.gen);
  if (x.exp < 0 && order) {
    for (unsigned i = 1; i < *order; ++i) out.push_back(Letter{x.gen, 1});
  } else {
    out.push_back(x);
  }
}

bool RewritingSystem::suffix_matches(std::span<const Letter> stack,
                                     const std::vector<Letter>& lhs) const {
  if (lhs.size() > stack.size()) return false;
  return std::equal(lhs.begin(), lhs.end(), stack.end() - static_cast<std::ptrdiff_t>(lhs.size()));
}

void RewritingSystem::push(std::vector<Letter>& stack, Letter input) const {
  std::vector<Letter> pending;
  normalize_into(input, pending);
  std::reverse(pending.begin(), pending.end());
  while (!pending.empty()) {
    const Letter x = pending.back();
    pending.pop_back();
    if (!stack.empty() && stack.back() == x.inverse()) {
      stack.pop_back();
      continue;
    }
    stack.push_back(x);
    for (std::size_t r : by_last_[x.code()]) {
      const Rule& rule = rules_[r];
      if (suffix_matches(stack, rule.lhs)) {
        stack.resize(stack.size() - rule.lhs.size());
        for (auto it = rule.rhs.rbegin(); it != rule.rhs.rend(); ++it) pending.push_back(*it);
        break;
      }
    }
  }
}

GroupWord RewritingSystem::reduce(std::span<const Letter> letters) const {
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (auto l : letters) push(stack, l);
  return GroupWord(std::move(stack));
}

bool RewritingSystem::extends_irreducibly(std::span<const Letter> w, Letter x) const {
  if (x.exp < 0 && orders_.at(x.gen)) return false;
  if (!w.empty() && w.back() == x.inverse()) return false;
  std::vector<Letter> probe(w.begin(), w.end());
  probe.push_back(x);
  for (std::size_t r : by_last_[x.code()]) {
    if (suffix_matches(probe, rules_[r].lhs)) return false;
  }
  return true;
}

}  // namespace selfsim
