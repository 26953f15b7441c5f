#include <algorithm>
#include <set>
#include <sstream>

#include "multivision/codec.hpp"
#include "multivision/primes.hpp"

namespace multivision {
namespace {

class Scanner {
 public:
  Scanner(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ == text_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) == word) {
      pos_ += word.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail("syntax-error", std::string("expected '") + c + "'");
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  // Decimal digits, as text. Fails if there are none.
  std::string_view digits(std::string_view what) {
    skip_ws();
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (begin == pos_) fail("syntax-error", "expected " + std::string(what));
    return text_.substr(begin, pos_ - begin);
  }

  std::uint64_t u64(std::string_view what) {
    const std::size_t begin = pos_;
    const auto d = digits(what);
    Exponent v;
    parse_decimal(d, v);
    if (v > std::numeric_limits<std::uint64_t>::max()) {
      pos_ = begin;
      fail("syntax-error", std::string(what) + " does not fit in 64 bits");
    }
    return v.convert_to<std::uint64_t>();
  }

  Exponent exponent() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '-') {
      fail("negative-exponent", "exponents must be nonnegative");
    }
    Exponent v;
    parse_decimal(digits("exponent"), v);
    return v;
  }

  std::size_t offset() {
    skip_ws();
    return pos_;
  }

  [[noreturn]] void fail(const std::string& code, const std::string& message) const {
    fail_at(pos_, code, message);
  }
  [[noreturn]] void fail_at(std::size_t offset, const std::string& code,
                            const std::string& message) const {
    throw GameError(code, "line " + std::to_string(line_) + ", column " +
                              std::to_string(offset + 1) + ": " + message);
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

FactoredNatural parse_pile(Scanner& sc) {
  FactoredNatural out;
  std::set<std::uint64_t> seen;
  do {
    const std::size_t at = sc.offset();
    const std::uint64_t base = sc.u64("prime");
    if (base == 1 && out.empty() && seen.empty() && sc.at_end()) return out;
    if (!is_prime(base)) sc.fail_at(at, "non-prime-base", std::to_string(base) + " is not prime");
    if (!seen.insert(base).second) {
      sc.fail_at(at, "duplicate-base", std::to_string(base) + " appears twice in one pile");
    }
    sc.expect('^');
    Exponent e = sc.exponent();
    if (e != 0) out.push_back(PrimePower{base, std::move(e)});
  } while (sc.accept('*'));
  if (!sc.at_end()) sc.fail("syntax-error", "unexpected trailing text");
  std::sort(out.begin(), out.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return out;
}

std::size_t prime_index(Scanner& sc, const Position& pos) {
  const std::size_t at = sc.offset();
  const std::uint64_t p = sc.u64("prime");
  auto idx = pos.window.index_of(p);
  if (!idx) sc.fail_at(at, "bad-prime-index", std::to_string(p) + " is not in the prime window");
  return *idx;
}

MovePart parse_part(Scanner& sc, const Position& pos, std::optional<std::size_t>& h) {
  if (!sc.accept_word("pile")) sc.fail("syntax-error", "expected 'pile'");
  const std::uint64_t pile = sc.u64("pile number");
  if (pile == 0) sc.fail("syntax-error", "piles are numbered from 1");
  sc.expect(':');
  sc.expect('/');
  const std::size_t divisor = prime_index(sc, pos);
  if (h && *h != divisor) sc.fail("syntax-error", "all parts must divide by the same prime");
  h = divisor;
  MovePart part{static_cast<std::size_t>(pile - 1), 1, {}};
  if (sc.accept('^')) part.divide = sc.u64("division exponent");
  while (sc.accept('*')) {
    const std::size_t q = prime_index(sc, pos);
    sc.expect('^');
    Exponent t = sc.exponent();
    if (part.increments.count(q)) sc.fail("syntax-error", "prime multiplied twice");
    if (t != 0) part.increments.emplace(q, std::move(t));
  }
  return part;
}

}  // namespace

std::vector<FactoredNatural> parse_position_text(std::string_view text) {
  std::vector<FactoredNatural> piles;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    Scanner sc(line, line_no);
    if (!sc.at_end()) piles.push_back(parse_pile(sc));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (piles.empty()) throw GameError("empty-pile-list", "no piles given");
  return piles;
}

std::string format_factored(const FactoredNatural& n) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [prime, exponent] : n) {
    if (exponent == 0) continue;
    if (!first) os << " * ";
    os << prime << '^' << exponent;
    first = false;
  }
  return first ? "1" : os.str();
}

std::string format_position_text(const Position& pos) {
  std::string out;
  for (std::size_t i = 0; i < pos.pile_count(); ++i) {
    FactoredNatural n;
    for (std::size_t q = 0; q < pos.window.size(); ++q) {
      n.push_back(PrimePower{pos.window[q], pos.piles[i][q]});
    }
    if (i > 0) out += '\n';
    out += format_factored(n);
  }
  return out;
}

FactoredNatural factorize_small(std::uint64_t n, std::uint64_t limit) {
  if (n == 0) throw GameError("bad-integer", "0 has no factorization");
  FactoredNatural out;
  std::uint64_t d = 2;
  while (d <= limit && d <= n / d) {
    if (n % d == 0) {
      std::uint64_t e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.push_back(PrimePower{d, e});
    }
    d += (d == 2) ? 1 : 2;
  }
  if (n > 1) {
    // Either n is prime (d*d > n) or every remaining factor exceeds limit.
    if (n > limit) {
      throw GameError("incomplete-factorization",
                      "cofactor " + std::to_string(n) + " exceeds trial-division limit " +
                          std::to_string(limit));
    }
    out.push_back(PrimePower{n, 1});
  }
  return out;
}

std::string format_move_text(const Position& pos, const Move& mv) {
  std::ostringstream os;
  const bool bracketed = mv.parts.size() > 1;
  if (bracketed) os << '[';
  for (std::size_t i = 0; i < mv.parts.size(); ++i) {
    const auto& part = mv.parts[i];
    if (i > 0) os << "; ";
    os << "pile " << part.pile + 1 << ": /" << pos.window[mv.prime_index];
    if (part.divide != 1) os << '^' << part.divide;
    for (const auto& [q, t] : part.increments) os << " *" << pos.window[q] << '^' << t;
  }
  if (bracketed) os << ']';
  return os.str();
}

Move parse_move_text(const Position& pos, std::string_view text) {
  Scanner sc(text, 1);
  std::optional<std::size_t> h;
  Move mv;
  if (sc.accept('[')) {
    do {
      mv.parts.push_back(parse_part(sc, pos, h));
    } while (sc.accept(';'));
    sc.expect(']');
  } else {
    mv.parts.push_back(parse_part(sc, pos, h));
  }
  if (!sc.at_end()) sc.fail("syntax-error", "unexpected trailing text");
  mv.prime_index = *h;
  return mv;
}

}  // namespace multivision
