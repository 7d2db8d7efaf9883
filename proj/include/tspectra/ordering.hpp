#pragma once

// Consistent eigenvalue orderings as n varies. A strategy fully determines
// the permutation for any input multiset; every tie is broken
// lexicographically on (Re, Im).

#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tspectra/errors.hpp"
#include "tspectra/symbol.hpp"

namespace tspectra {

enum class OrderKind { real_asc, imag_asc, imag_desc, chain_from_origin, nearest_to_symbol };

inline std::string_view order_kind_name(OrderKind k) {
  switch (k) {
    case OrderKind::real_asc: return "real-asc";
    case OrderKind::imag_asc: return "imag-asc";
    case OrderKind::imag_desc: return "imag-desc";
    case OrderKind::chain_from_origin: return "chain";
    case OrderKind::nearest_to_symbol: return "nearest-symbol";
  }
  return "?";
}

inline std::optional<OrderKind> order_kind_from_name(std::string_view name) {
  for (OrderKind k : {OrderKind::real_asc, OrderKind::imag_asc, OrderKind::imag_desc, OrderKind::chain_from_origin,
                      OrderKind::nearest_to_symbol}) {
    if (order_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

template <RealScalar Real>
struct OrderingStrategy {
  OrderKind kind = OrderKind::real_asc;
  /// Reference symbol, required by nearest_to_symbol only.
  std::optional<LaurentSymbol<Real>> symbol;

  static OrderingStrategy real_asc() { return {OrderKind::real_asc, std::nullopt}; }
  static OrderingStrategy imag_asc() { return {OrderKind::imag_asc, std::nullopt}; }
  static OrderingStrategy imag_desc() { return {OrderKind::imag_desc, std::nullopt}; }
  static OrderingStrategy chain_from_origin() { return {OrderKind::chain_from_origin, std::nullopt}; }
  static OrderingStrategy nearest_to_symbol(LaurentSymbol<Real> sym) {
    return {OrderKind::nearest_to_symbol, std::move(sym)};
  }
};

template <RealScalar Real>
struct OrderedSpectrum {
  std::vector<Complex<Real>> values;
  OrderingStrategy<Real> strategy;
  std::size_t n = 0;
  /// Positions (into values) of a marked subsequence; empty means the full spectrum.
  std::vector<std::size_t> subset;
};

namespace detail {

template <RealScalar Real>
std::vector<Complex<Real>> chain_order(std::vector<Complex<Real>> pool) {
  std::vector<Complex<Real>> out;
  out.reserve(pool.size());
  // Seed: smallest modulus. Squared moduli compare identically and avoid sqrt.
  auto closest_to = [&pool](const auto& dist) {
    std::size_t best = 0;
    Real best_d = dist(pool[0]);
    for (std::size_t i = 1; i < pool.size(); ++i) {
      Real d = dist(pool[i]);
      if (d < best_d || (!(best_d < d) && lex_less(pool[i], pool[best]))) {
        best_d = std::move(d);
        best = i;
      }
    }
    return best;
  };
  std::size_t idx = closest_to([](const Complex<Real>& z) { return norm(z); });
  while (true) {
    out.push_back(std::move(pool[idx]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    if (pool.empty()) break;
    const Complex<Real>& last = out.back();
    idx = closest_to([&last](const Complex<Real>& z) { return norm(z - last); });
  }
  return out;
}

template <RealScalar Real>
std::vector<Complex<Real>> nearest_symbol_order(const std::vector<Complex<Real>>& values,
                                                const LaurentSymbol<Real>& sym, const PrecisionContext& ctx) {
  const std::size_t n = values.size();
  const Real step = num::pi<Real>(ctx) / static_cast<long>(n + 1);
  std::vector<Complex<Real>> targets;
  targets.reserve(n);
  for (std::size_t j = 1; j <= n; ++j) targets.push_back(evaluate(sym, step * static_cast<long>(j), ctx));

  struct Pair {
    std::size_t value;
    std::size_t slot;
  };
  std::vector<Real> dist(n * n);
  std::vector<Pair> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i * n + j] = norm(values[i] - targets[j]);
      pairs.push_back({i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    const Real& da = dist[a.value * n + a.slot];
    const Real& db = dist[b.value * n + b.slot];
    if (da < db) return true;
    if (db < da) return false;
    if (lex_less(values[a.value], values[b.value])) return true;
    if (lex_less(values[b.value], values[a.value])) return false;
    return a.slot < b.slot;
  });

  std::vector<bool> used_value(n, false);
  std::vector<bool> used_slot(n, false);
  std::vector<Complex<Real>> out(n);
  std::size_t assigned = 0;
  for (const Pair& p : pairs) {
    if (used_value[p.value] || used_slot[p.slot]) continue;
    used_value[p.value] = used_slot[p.slot] = true;
    out[p.slot] = values[p.value];
    if (++assigned == n) break;
  }
  return out;
}

}  // namespace detail

/// Arrange a spectrum according to `strategy`. The output is always a
/// permutation of the input and does not depend on the input order.
template <RealScalar Real>
OrderedSpectrum<Real> order(std::vector<Complex<Real>> values, const OrderingStrategy<Real>& strategy,
                            const PrecisionContext& ctx) {
  if (values.empty()) throw InputError("cannot order an empty spectrum");
  OrderedSpectrum<Real> out;
  out.n = values.size();
  out.strategy = strategy;
  switch (strategy.kind) {
    case OrderKind::real_asc:
      std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
      break;
    case OrderKind::imag_asc:
      std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
        if (a.im < b.im) return true;
        if (b.im < a.im) return false;
        return a.re < b.re;
      });
      break;
    case OrderKind::imag_desc:
      std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
        if (b.im < a.im) return true;
        if (a.im < b.im) return false;
        return a.re < b.re;
      });
      break;
    case OrderKind::chain_from_origin:
      values = detail::chain_order(std::move(values));
      break;
    case OrderKind::nearest_to_symbol:
      if (!strategy.symbol) throw InputError("nearest_to_symbol ordering needs a reference symbol");
      values = detail::nearest_symbol_order(values, *strategy.symbol, ctx);
      break;
  }
  out.values = std::move(values);
  return out;
}

/// Mark the positions whose eigenvalue satisfies `keep`.
template <RealScalar Real>
OrderedSpectrum<Real> mark_subset(OrderedSpectrum<Real> spectrum,
                                  const std::function<bool(const Complex<Real>&)>& keep) {
  spectrum.subset.clear();
  for (std::size_t i = 0; i < spectrum.values.size(); ++i) {
    if (keep(spectrum.values[i])) spectrum.subset.push_back(i);
  }
  return spectrum;
}

/// `j,theta,lambda_re,lambda_im` with theta_{j,n} = j pi / (n+1).
template <RealScalar Real>
void write_spectrum_csv(std::ostream& os, const OrderedSpectrum<Real>& spectrum, const PrecisionContext& ctx) {
  os << "j,theta,lambda_re,lambda_im\n";
  const std::size_t n = spectrum.values.size();
  const Real pi = num::pi<Real>(ctx);
  for (std::size_t j = 1; j <= n; ++j) {
    const Real theta =
        pi * num::from_int<Real>(static_cast<long>(j), ctx) / num::from_int<Real>(static_cast<long>(n + 1), ctx);
    const auto& z = spectrum.values[j - 1];
    os << j << ',' << num::format(theta, ctx) << ',' << num::format(z.re, ctx) << ',' << num::format(z.im, ctx)
       << '\n';
  }
}

}  // namespace tspectra
