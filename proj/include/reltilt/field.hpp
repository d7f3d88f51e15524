#pragma once

#include <cstdint>

#include "reltilt/errors.hpp"

namespace rt {

// A field element is a residue in [0, p). The prime is carried by Fp.
using Fel = std::uint32_t;

struct Fp {
  std::uint32_t p = 2;

  static bool isPrime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  static Fp make(std::uint32_t p) {
    if (p < 2 || p > (1u << 31) || !isPrime(p))
      fail(Errc::BadInput, "field characteristic must be a prime in [2, 2^31]");
    return Fp{p};
  }

  Fel norm(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return static_cast<Fel>(r);
  }
  Fel add(Fel a, Fel b) const {
    std::uint64_t s = std::uint64_t(a) + b;
    if (s >= p) s -= p;
    return static_cast<Fel>(s);
  }
  Fel sub(Fel a, Fel b) const { return a >= b ? a - b : a + p - b; }
  Fel neg(Fel a) const { return a == 0 ? 0 : p - a; }
  Fel mul(Fel a, Fel b) const { return static_cast<Fel>((std::uint64_t(a) * b) % p); }
  Fel pow(Fel a, std::uint64_t e) const {
    Fel r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  Fel inv(Fel a) const {
    if (a == 0) fail(Errc::BadInput, "inverse of zero");
    return pow(a, p - 2);
  }

  bool operator==(const Fp&) const = default;
};

}  // namespace rt
