#pragma once

// Banded Laurent symbols f(theta) = sum_k fhat_k e^{i k theta}: representation,
// text and JSON formats, evaluation, coefficient-wise real/imaginary split, and
// the four built-in example symbols.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tspectra/errors.hpp"
#include "tspectra/precision.hpp"
#include "tspectra/scalar.hpp"

namespace tspectra {

/// Finite map k -> fhat_k. Only non-zero coefficients are stored, plus k = 0
/// when it is given explicitly, so the band edges are the extreme stored offsets.
template <RealScalar Real>
class LaurentSymbol {
 public:
  using Coefficients = std::map<int, Complex<Real>>;

  LaurentSymbol() = default;

  explicit LaurentSymbol(Coefficients coeffs) {
    for (auto& [k, c] : coeffs) {
      if (k != 0 && num::is_zero(c.re) && num::is_zero(c.im)) continue;
      coeffs_.emplace(k, std::move(c));
    }
  }

  const Coefficients& coeffs() const noexcept { return coeffs_; }

  /// Pointer to fhat_k, or nullptr when the offset is not stored.
  const Complex<Real>* find(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? nullptr : &it->second;
  }

  /// K_min: largest |k| among stored negative offsets.
  int band_lower() const noexcept {
    if (coeffs_.empty() || coeffs_.begin()->first >= 0) return 0;
    return -coeffs_.begin()->first;
  }

  /// K_max: largest stored positive offset.
  int band_upper() const noexcept {
    if (coeffs_.empty() || coeffs_.rbegin()->first <= 0) return 0;
    return coeffs_.rbegin()->first;
  }

  /// Real cosine trigonometric polynomial: all coefficients real and fhat_k = fhat_{-k}.
  bool is_rctp() const {
    for (const auto& [k, c] : coeffs_) {
      if (!num::is_zero(c.im)) return false;
      const Complex<Real>* mirror = find(-k);
      if (mirror == nullptr) return false;
      if (mirror->re != c.re) return false;
    }
    return true;
  }

  friend bool operator==(const LaurentSymbol& a, const LaurentSymbol& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  Coefficients coeffs_;
};

/// A curve sampled on increasing theta in (0, pi).
template <RealScalar Real>
struct SampledCurve {
  std::vector<Real> thetas;
  std::vector<Complex<Real>> values;
};

namespace detail {

class SymbolLexer {
 public:
  explicit SymbolLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  std::size_t pos() const { return pos_; }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected ") + what);
  }

  std::optional<char> peek() {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    return text_[pos_];
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer offset");
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    try {
      return std::stoi(lexeme);
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("offset out of range");
    }
  }

  /// DECIMAL: digits [. digits] [e [sign] digits], or . digits [exponent].
  std::string decimal(bool allow_sign) {
    skip_ws();
    const std::size_t start = pos_;
    if (allow_sign && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t ndigits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
      ++ndigits;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++ndigits;
      }
    }
    if (ndigits == 0) {
      pos_ = start;
      fail("expected decimal number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t epos = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
      const std::size_t d0 = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == d0) {
        pos_ = epos;
        fail("malformed exponent");
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& reason) const { throw ParseError(pos_, reason); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse `k:re(+|-)imi; ...`, e.g. "0:2+0i; 1:-1+0i; -1:-2+1i".
/// Literals are rounded once, correctly, to the context precision.
template <RealScalar Real>
LaurentSymbol<Real> parse_symbol(std::string_view text, const PrecisionContext& ctx) {
  detail::SymbolLexer lex(text);
  typename LaurentSymbol<Real>::Coefficients coeffs;
  do {
    const std::size_t entry_pos = (lex.skip_ws(), lex.pos());
    const int k = lex.integer();
    lex.expect(':', "':' after offset");
    const std::string re = lex.decimal(true);
    bool negative_im = false;
    if (lex.accept('-')) {
      negative_im = true;
    } else if (!lex.accept('+')) {
      lex.fail("expected '+' or '-' before imaginary part");
    }
    std::string im = lex.decimal(false);
    lex.expect('i', "'i' after imaginary part");
    if (negative_im) im.insert(0, "-");
    if (coeffs.count(k) != 0) {
      (void)entry_pos;
      throw DuplicateOffset(k);
    }
    coeffs.emplace(k, Complex<Real>(num::parse<Real>(re, ctx), num::parse<Real>(im, ctx)));
  } while (lex.accept(';'));
  if (!lex.at_end()) lex.fail("unexpected trailing input");
  return LaurentSymbol<Real>(std::move(coeffs));
}

/// Canonical text form, ascending offsets; parse_symbol inverts it exactly.
template <RealScalar Real>
std::string format_symbol(const LaurentSymbol<Real>& sym, const PrecisionContext& ctx) {
  std::string out;
  for (const auto& [k, c] : sym.coeffs()) {
    if (!out.empty()) out += "; ";
    out += std::to_string(k) + ":" + num::format(c.re, ctx);
    std::string im = num::format(c.im, ctx);
    if (!im.empty() && im.front() == '-') {
      out += "-" + im.substr(1);
    } else {
      out += "+" + im;
    }
    out += "i";
  }
  if (out.empty()) out = "0:" + num::format(num::from_int<Real>(0, ctx), ctx) + "+" +
                         num::format(num::from_int<Real>(0, ctx), ctx) + "i";
  return out;
}

/// JSON mirror: {"k": {"re": "<decimal>", "im": "<decimal>"}}.
template <RealScalar Real>
nlohmann::json symbol_to_json(const LaurentSymbol<Real>& sym, const PrecisionContext& ctx) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, c] : sym.coeffs()) {
    j[std::to_string(k)] = {{"re", num::format(c.re, ctx)}, {"im", num::format(c.im, ctx)}};
  }
  return j;
}

template <RealScalar Real>
LaurentSymbol<Real> symbol_from_json(const nlohmann::json& j, const PrecisionContext& ctx) {
  if (!j.is_object()) throw InputError("symbol JSON must be an object");
  typename LaurentSymbol<Real>::Coefficients coeffs;
  for (const auto& [key, value] : j.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError("symbol JSON key '" + key + "' is not an integer offset");
    }
    if (!value.is_object() || !value.contains("re") || !value.contains("im") ||
        !value["re"].is_string() || !value["im"].is_string()) {
      throw InputError("symbol JSON entry '" + key + "' needs string fields re and im");
    }
    if (coeffs.count(k) != 0) throw DuplicateOffset(k);
    try {
      coeffs.emplace(k, Complex<Real>(num::parse<Real>(value["re"].template get<std::string>(), ctx),
                                      num::parse<Real>(value["im"].template get<std::string>(), ctx)));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("symbol JSON entry '") + key + "': " + e.what());
    }
  }
  return LaurentSymbol<Real>(std::move(coeffs));
}

/// f(theta) = sum_k fhat_k (cos k theta + i sin k theta).
template <RealScalar Real>
Complex<Real> evaluate(const LaurentSymbol<Real>& sym, const Real& theta, const PrecisionContext& ctx) {
  using std::cos;
  using std::sin;
  Complex<Real> acc = num::complex_zero<Real>(ctx);
  for (const auto& [k, c] : sym.coeffs()) {
    if (k == 0) {
      acc += c;
      continue;
    }
    const Real angle = theta * static_cast<long>(k);
    acc += c * Complex<Real>(cos(angle), sin(angle));
  }
  return acc;
}

/// Coefficient-wise real part: rhat_k = Re fhat_k. This matches the matrix
/// identity T_n(f) = T_n(r) + i T_n(m); it is not the pointwise Re f(theta)
/// when the symbol has complex coefficients at unpaired offsets.
template <RealScalar Real>
LaurentSymbol<Real> real_part_symbol(const LaurentSymbol<Real>& sym) {
  typename LaurentSymbol<Real>::Coefficients out;
  for (const auto& [k, c] : sym.coeffs()) out.emplace(k, Complex<Real>(c.re, c.re * 0));
  return LaurentSymbol<Real>(std::move(out));
}

/// Coefficient-wise imaginary part: mhat_k = Im fhat_k.
template <RealScalar Real>
LaurentSymbol<Real> imag_part_symbol(const LaurentSymbol<Real>& sym) {
  typename LaurentSymbol<Real>::Coefficients out;
  for (const auto& [k, c] : sym.coeffs()) out.emplace(k, Complex<Real>(c.im, c.im * 0));
  return LaurentSymbol<Real>(std::move(out));
}

enum class Preset { example1, example2, example3, example4 };

struct PresetInfo {
  Preset id;
  const char* name;
  const char* text;
  const char* description;
};

inline const std::array<PresetInfo, 4>& preset_table() {
  static const std::array<PresetInfo, 4> table{{
      {Preset::example1, "example1", "-1:-2+1i; 0:2+0i; 1:-1+0i",
       "tridiagonal -e^{it} + 2 + (-2+i)e^{-it}; spectrum known in closed form"},
      {Preset::example2, "example2", "-2:-1+1i; -1:1-4i; 0:0+6i; 1:1-4i; 2:-1+1i",
       "2cos(t) - 2cos(2t) + i(2 - 2cos(t))^2; complex symmetric pentadiagonal"},
      {Preset::example3, "example3", "-3:0-1i; -2:-1+1i; -1:1+0i; 1:1+0i; 2:-1+1i; 3:0-1i",
       "2cos(t) - 2cos(2t) + i(2cos(2t) - 2cos(3t)); neither part monotone"},
      {Preset::example4, "example4", "-3:1+0i; -2:1+0i; -1:1+0i; 0:1+0i; 1:-1+0i",
       "Grcar: -e^{it} + 1 + e^{-it} + e^{-2it} + e^{-3it}"},
  }};
  return table;
}

inline std::optional<Preset> preset_from_name(std::string_view name) {
  for (const auto& p : preset_table()) {
    if (name == p.name) return p.id;
  }
  return std::nullopt;
}

inline const PresetInfo& preset_info(Preset id) {
  for (const auto& p : preset_table()) {
    if (p.id == id) return p;
  }
  throw InputError("unknown preset");
}

template <RealScalar Real>
LaurentSymbol<Real> preset(Preset id, const PrecisionContext& ctx) {
  return parse_symbol<Real>(preset_info(id).text, ctx);
}

/// The spectral function of example1 in closed form: g = 2 + 2 sqrt(-1) sqrt(-2+i) cos(theta),
/// principal branches, stored as the symmetric symbol {0: 2, +-1: sqrt(-1) sqrt(-2+i)}.
template <RealScalar Real>
LaurentSymbol<Real> example1_spectral_symbol(const PrecisionContext& ctx) {
  const Complex<Real> minus_one = num::complex_from<Real>(-1, 0, ctx);
  const Complex<Real> w = num::complex_from<Real>(-2, 1, ctx);
  const Complex<Real> g1 = sqrt(minus_one) * sqrt(w);
  typename LaurentSymbol<Real>::Coefficients c;
  c.emplace(0, num::complex_from<Real>(2, 0, ctx));
  c.emplace(1, g1);
  c.emplace(-1, g1);
  return LaurentSymbol<Real>(std::move(c));
}

/// Sample a symbol on the given angles.
template <RealScalar Real>
SampledCurve<Real> sample(const LaurentSymbol<Real>& sym, std::vector<Real> thetas, const PrecisionContext& ctx) {
  SampledCurve<Real> curve;
  curve.values.reserve(thetas.size());
  for (const auto& t : thetas) curve.values.push_back(evaluate(sym, t, ctx));
  curve.thetas = std::move(thetas);
  return curve;
}

}  // namespace tspectra
