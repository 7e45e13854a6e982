#include "glocal/ring.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

namespace glocal {
namespace {

constexpr std::uint64_t kTableLimit = 1024;

// n = p^k with p prime; returns {p, k} or {0, 0}.
std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t n) {
  if (n < 2) return {0, 0};
  std::uint64_t p = 2;
  while (n % p != 0) ++p;
  std::uint32_t k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  if (n != 1) return {0, 0};
  return {static_cast<std::uint32_t>(p), k};
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

// Reduction polynomials u^m = -(c_0 + c_1 u + ... + c_{m-1} u^{m-1}).
// Stored as the low coefficients of the monic modulus.
const std::map<std::uint32_t, std::vector<std::uint32_t>>& modulus_table() {
  static const std::map<std::uint32_t, std::vector<std::uint32_t>> table = {
      {4, {1, 1}},      // u^2 + u + 1
      {8, {1, 1, 0}},   // u^3 + u + 1
      {9, {1, 0}},      // u^2 + 1
      {25, {2, 0}},     // u^2 + 2
      {27, {1, 2, 0}},  // u^3 + 2u + 1
      {49, {1, 0}},     // u^2 + 1
  };
  return table;
}

std::uint32_t parse_uint(std::string_view s, std::string_view what) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::bad_spec, "expected an integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

RingSpec RingSpec::parse(std::string_view text) {
  RingSpec spec;
  constexpr std::string_view suffix = "!nohalf";
  if (text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix) {
    spec.allow_no_half = true;
    text.remove_suffix(suffix.size());
  }
  auto parts = split_on(text, ':');
  const auto& kind = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count)
      throw Error(Errc::bad_spec, "ring spec '" + std::string(text) + "' has the wrong number of fields");
  };
  auto field = [&](std::string_view s) {
    std::uint32_t q = parse_uint(s, "field size");
    auto [p, m] = prime_power(q);
    if (p == 0) throw Error(Errc::bad_spec, "field size " + std::to_string(q) + " is not a prime power");
    if (m > 1 && !modulus_table().count(q))
      throw Error(Errc::bad_spec, "no irreducible polynomial on file for GF(" + std::to_string(q) + ")");
    spec.prime = p;
    spec.field_size = q;
    return m;
  };
  if (kind == "zmod") {
    need(2);
    spec.kind = RingKind::zmod;
    std::uint32_t n = parse_uint(parts[1], "modulus");
    auto [p, k] = prime_power(n);
    if (p == 0) throw Error(Errc::bad_spec, "zmod modulus " + std::to_string(n) + " is not a prime power");
    spec.prime = p;
    spec.exponent = k;
  } else if (kind == "gf") {
    need(2);
    spec.kind = RingKind::gf;
    field(parts[1]);
  } else if (kind == "dual") {
    need(3);
    spec.kind = RingKind::dual;
    field(parts[1]);
    spec.nil_index = parse_uint(parts[2], "nilpotency index");
    if (spec.nil_index < 1) throw Error(Errc::bad_spec, "dual ring needs k >= 1");
  } else if (kind == "twist") {
    need(3);
    spec.kind = RingKind::twist;
    std::uint32_t m = field(parts[1]);
    spec.frobenius_power = parse_uint(parts[2], "Frobenius power");
    if (spec.frobenius_power >= m)
      throw Error(Errc::bad_spec, "Frobenius power r must be below the degree of GF(q)");
  } else {
    throw Error(Errc::bad_spec, "unknown ring kind '" + std::string(kind) + "'");
  }
  return spec;
}

std::string RingSpec::str() const {
  std::string s;
  switch (kind) {
    case RingKind::zmod: s = "zmod:" + std::to_string(ipow(prime, exponent)); break;
    case RingKind::gf: s = "gf:" + std::to_string(field_size); break;
    case RingKind::dual: s = "dual:" + std::to_string(field_size) + ":" + std::to_string(nil_index); break;
    case RingKind::twist: s = "twist:" + std::to_string(field_size) + ":" + std::to_string(frobenius_power); break;
  }
  if (allow_no_half) s += "!nohalf";
  return s;
}

RingPtr Ring::make(const RingSpec& spec) {
  auto ring = std::shared_ptr<Ring>(new Ring(spec));
  if (!ring->has_half_ && !spec.allow_no_half)
    throw Error(Errc::no_half, "2 is not a unit in " + spec.str());
  return ring;
}

Ring::Ring(const RingSpec& spec) : spec_(spec) {
  if (spec.kind == RingKind::zmod) {
    order_ = ipow(spec.prime, spec.exponent);
    characteristic_ = order_;
    residue_size_ = spec.prime;
    one_ = {1};
    components_ = 1;
    digits_ = 1;
  } else {
    const std::uint32_t q = spec.field_size;
    const std::uint32_t p = spec.prime;
    std::uint32_t m = 0;
    for (std::uint64_t t = 1; t < q; t *= p) ++m;
    field_q_ = q;
    // GF(q) element code: big-endian over coefficients (c_0, ..., c_{m-1}).
    auto to_coeffs = [&](std::uint32_t code) {
      std::vector<std::uint32_t> c(m);
      for (std::uint32_t i = m; i-- > 0;) {
        c[i] = code % p;
        code /= p;
      }
      return c;
    };
    auto from_coeffs = [&](const std::vector<std::uint32_t>& c) {
      std::uint32_t code = 0;
      for (std::uint32_t i = 0; i < m; ++i) code = code * p + c[i];
      return code;
    };
    std::vector<std::uint32_t> low = m > 1 ? modulus_table().at(q) : std::vector<std::uint32_t>{};
    field_add_.resize(q * q);
    field_mul_.resize(q * q);
    field_neg_.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      auto ca = to_coeffs(a);
      std::vector<std::uint32_t> cn(m);
      for (std::uint32_t i = 0; i < m; ++i) cn[i] = (p - ca[i]) % p;
      field_neg_[a] = from_coeffs(cn);
      for (std::uint32_t b = 0; b < q; ++b) {
        auto cb = to_coeffs(b);
        std::vector<std::uint32_t> cs(m);
        for (std::uint32_t i = 0; i < m; ++i) cs[i] = (ca[i] + cb[i]) % p;
        field_add_[a * q + b] = from_coeffs(cs);
        std::vector<std::uint64_t> prod(2 * m, 0);
        for (std::uint32_t i = 0; i < m; ++i)
          for (std::uint32_t j = 0; j < m; ++j) prod[i + j] += std::uint64_t(ca[i]) * cb[j];
        for (std::uint32_t d = 2 * m - 1; d-- > m;) {
          std::uint64_t top = prod[d] % p;
          prod[d] = 0;
          for (std::uint32_t i = 0; i < m; ++i) prod[d - m + i] += (p - low[i]) % p * top;
        }
        std::vector<std::uint32_t> cr(m);
        for (std::uint32_t i = 0; i < m; ++i) cr[i] = static_cast<std::uint32_t>(prod[i] % p);
        field_mul_[a * q + b] = from_coeffs(cr);
      }
    }
    std::vector<std::uint32_t> unit(m, 0);
    unit[0] = 1;
    field_one_ = from_coeffs(unit);

    frobenius_.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      std::uint32_t x = a;
      for (std::uint32_t step = 0; step < spec.frobenius_power; ++step) {
        std::uint32_t y = field_one_;
        for (std::uint32_t i = 0; i < p; ++i) y = f_mul(y, x);
        x = y;
      }
      frobenius_[a] = x;
    }

    switch (spec.kind) {
      case RingKind::gf: components_ = 1; break;
      case RingKind::dual: components_ = spec.nil_index; break;
      case RingKind::twist: components_ = 2; break;
      default: break;
    }
    digits_ = components_ * m;
    order_ = ipow(q, components_);
    characteristic_ = p;
    residue_size_ = q;
    commutative_ = spec.kind != RingKind::twist || spec.frobenius_power == 0;
    std::vector<std::uint32_t> parts(components_, 0);
    parts[0] = field_one_;
    one_ = join(parts);
  }

  if (order_ <= kTableLimit) {
    add_.resize(order_ * order_);
    mul_.resize(order_ * order_);
    neg_.resize(order_);
    for (std::uint32_t a = 0; a < order_; ++a) {
      neg_[a] = slow_neg({a}).code;
      for (std::uint32_t b = 0; b < order_; ++b) {
        add_[a * order_ + b] = slow_add({a}, {b}).code;
        mul_[a * order_ + b] = slow_mul({a}, {b}).code;
      }
    }
    tabled_ = true;
  }
  has_half_ = is_unit(from_int(2));
}

std::vector<std::uint32_t> Ring::split(Elem a) const {
  std::vector<std::uint32_t> parts(components_);
  std::uint32_t code = a.code;
  for (std::uint32_t i = components_; i-- > 0;) {
    parts[i] = code % field_q_;
    code /= field_q_;
  }
  return parts;
}

Elem Ring::join(const std::vector<std::uint32_t>& parts) const {
  std::uint32_t code = 0;
  for (auto c : parts) code = code * field_q_ + c;
  return {code};
}

Elem Ring::slow_add(Elem a, Elem b) const {
  if (spec_.kind == RingKind::zmod) return {static_cast<std::uint32_t>((a.code + std::uint64_t(b.code)) % order_)};
  auto x = split(a), y = split(b);
  for (std::uint32_t i = 0; i < components_; ++i) x[i] = f_add(x[i], y[i]);
  return join(x);
}

Elem Ring::slow_neg(Elem a) const {
  if (spec_.kind == RingKind::zmod) return {static_cast<std::uint32_t>((order_ - a.code) % order_)};
  auto x = split(a);
  for (auto& c : x) c = field_neg_[c];
  return join(x);
}

Elem Ring::slow_mul(Elem a, Elem b) const {
  switch (spec_.kind) {
    case RingKind::zmod:
      return {static_cast<std::uint32_t>(std::uint64_t(a.code) * b.code % order_)};
    case RingKind::gf:
      return {f_mul(a.code, b.code)};
    case RingKind::dual: {
      auto x = split(a), y = split(b);
      std::vector<std::uint32_t> z(components_, 0);
      for (std::uint32_t i = 0; i < components_; ++i)
        for (std::uint32_t j = 0; i + j < components_; ++j) z[i + j] = f_add(z[i + j], f_mul(x[i], y[j]));
      return join(z);
    }
    case RingKind::twist: {
      // (a0 + a1 t)(b0 + b1 t) = a0 b0 + (a0 b1 + a1 s(b0)) t
      auto x = split(a), y = split(b);
      return join({f_mul(x[0], y[0]), f_add(f_mul(x[0], y[1]), f_mul(x[1], frobenius_[y[0]]))});
    }
  }
  return {};
}

Elem Ring::from_int(long long value) const {
  long long c = static_cast<long long>(characteristic_);
  long long r = ((value % c) + c) % c;
  if (spec_.kind == RingKind::zmod) return {static_cast<std::uint32_t>(r)};
  Elem acc = zero();
  for (long long i = 0; i < r; ++i) acc = add(acc, one_);
  return acc;
}

Elem Ring::at(std::uint64_t code) const {
  if (code >= order_) throw Error(Errc::bad_index, "element code out of range for " + name());
  return {static_cast<std::uint32_t>(code)};
}

bool Ring::is_unit(Elem a) const {
  if (spec_.kind == RingKind::zmod) return a.code % spec_.prime != 0;
  return split(a)[0] != 0;
}

Elem Ring::pow(Elem a, std::uint64_t e) const {
  Elem result = one_;
  Elem base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Elem Ring::inverse(Elem a) const {
  if (!is_unit(a)) throw Error(Errc::not_a_unit, format(a) + " is not a unit in " + name());
  // The unit group has order |R| - |J|; powers of a single element commute.
  return pow(a, order_ - radical_size() - 1);
}

Elem Ring::half() const {
  if (!has_half_) throw Error(Errc::no_half, "2 is not a unit in " + name());
  return inverse(from_int(2));
}

Elem Ring::residue(Elem a) const {
  if (spec_.kind == RingKind::zmod) return {a.code % spec_.prime};
  return {split(a)[0]};
}

const RingPtr& Ring::residue_field() const {
  if (!residue_field_) {
    RingSpec f;
    f.kind = RingKind::gf;
    f.prime = spec_.prime;
    f.field_size = static_cast<std::uint32_t>(residue_size_);
    f.allow_no_half = spec_.prime == 2;
    residue_field_ = Ring::make(f);
  }
  return residue_field_;
}

std::string Ring::format(Elem a) const {
  if (spec_.kind == RingKind::zmod) return std::to_string(a.code);
  std::vector<std::uint32_t> digits(digits_);
  std::uint32_t code = a.code;
  for (std::uint32_t i = digits_; i-- > 0;) {
    digits[i] = code % spec_.prime;
    code /= spec_.prime;
  }
  std::string s;
  for (std::uint32_t i = 0; i < digits_; ++i) {
    if (i) s += ',';
    s += std::to_string(digits[i]);
  }
  return s;
}

Elem Ring::parse(std::string_view text) const {
  auto bad = [&] { return Error(Errc::parse, "cannot read '" + std::string(text) + "' as an element of " + name()); };
  if (text.find(',') == std::string_view::npos) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) throw bad();
    return from_int(v);
  }
  auto parts = split_on(text, ',');
  if (parts.size() != digits_) throw bad();
  std::uint32_t code = 0;
  for (auto part : parts) {
    std::uint32_t d = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), d);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty() || d >= spec_.prime) throw bad();
    code = code * spec_.prime + d;
  }
  return {code};
}

std::vector<Elem> Ring::elements(std::uint64_t cap) const {
  if (order_ > cap)
    throw Error(Errc::cap_exceeded, name() + " has " + std::to_string(order_) + " elements, cap is " + std::to_string(cap));
  std::vector<Elem> out(order_);
  for (std::uint32_t i = 0; i < order_; ++i) out[i] = {i};
  return out;
}

std::vector<std::string> ring_catalog() {
  return {"zmod:3",    "zmod:5",    "zmod:7",    "zmod:9",    "zmod:11",   "zmod:13",   "zmod:25",
          "zmod:27",   "zmod:49",   "zmod:81",   "zmod:121",  "zmod:125",  "zmod:243",  "zmod:343",
          "zmod:625",  "zmod:729",  "zmod:2187", "zmod:3125", "zmod:6561", "gf:3",      "gf:5",
          "gf:7",      "gf:9",      "gf:25",     "gf:27",     "gf:49",     "dual:3:2",  "dual:3:3",
          "dual:3:4",  "dual:5:2",  "dual:5:3",  "dual:7:2",  "dual:9:2",  "dual:9:3",  "dual:25:2",
          "dual:27:2", "dual:49:2", "twist:9:1", "twist:25:1", "twist:27:1", "twist:27:2", "twist:49:1"};
}

LocalityReport verify_local(const Ring& ring, std::uint64_t cap) {
  LocalityReport rep;
  auto elems = ring.elements(cap);
  const Elem one = ring.one();
  // Units by direct inverse search, independent of is_unit().
  std::vector<char> unit(elems.size(), 0);
  for (auto x : elems) {
    if (unit[x.code]) continue;
    for (auto y : elems) {
      if (ring.mul(x, y) == one && ring.mul(y, x) == one) {
        unit[x.code] = unit[y.code] = 1;
        break;
      }
    }
  }
  std::vector<Elem> non_units;
  for (auto x : elems)
    if (!unit[x.code]) non_units.push_back(x);
  rep.unit_count = elems.size() - non_units.size();
  rep.radical_size = non_units.size();
  rep.two_is_unit = unit[ring.from_int(2).code];

  auto fail = [&](std::string why) {
    rep.local = false;
    rep.failure = std::move(why);
    return rep;
  };
  for (auto x : non_units)
    for (auto y : non_units)
      if (unit[ring.add(x, y).code]) return fail("non-units " + ring.format(x) + " + " + ring.format(y) + " is a unit");
  for (auto x : non_units)
    for (auto r : elems) {
      if (unit[ring.mul(r, x).code]) return fail("r*x is a unit for non-unit " + ring.format(x));
      if (unit[ring.mul(x, r).code]) return fail("x*r is a unit for non-unit " + ring.format(x));
    }
  for (auto x : elems)
    if (ring.radical_member(x) != !unit[x.code]) return fail("radical_member disagrees with inverse search");

  // R/J: the residue map must vanish exactly on J and hit every field element.
  const auto& field = ring.residue_field();
  std::vector<char> hit(field->order(), 0);
  for (auto x : elems) {
    Elem r = ring.residue(x);
    hit[r.code] = 1;
    if ((r == field->zero()) != !unit[x.code]) return fail("residue map kernel is not the non-units");
  }
  if (std::count(hit.begin(), hit.end(), 1) != static_cast<long>(field->order()))
    return fail("residue map is not onto");
  rep.residue_is_field = true;
  for (auto a : field->elements())
    if (a != field->zero() && !field->is_unit(a)) rep.residue_is_field = false;
  rep.residue_field_size = field->order();
  rep.residue_field = "gf:" + std::to_string(field->order());
  rep.local = rep.residue_is_field && rep.radical_size * rep.residue_field_size == elems.size();
  if (!rep.local) rep.failure = "order is not |J| * |R/J|";
  return rep;
}

std::vector<Elem> sqrt_one(const Ring& ring, std::uint64_t cap) {
  std::vector<Elem> out;
  for (auto x : ring.elements(cap))
    if (ring.mul(x, x) == ring.one()) out.push_back(x);
  return out;
}

}  // namespace glocal
