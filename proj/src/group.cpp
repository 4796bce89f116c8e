#include "mixer/group.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "mixer/error.hpp"

namespace mixer {

namespace detail {

class Engine {
 public:
  virtual ~Engine() = default;
  virtual std::size_t width() const = 0;
  virtual void identity(std::uint16_t* out) const = 0;
  virtual void multiply(const std::uint16_t* a, const std::uint16_t* b, std::uint16_t* out) const = 0;
  virtual void invert(const std::uint16_t* a, std::uint16_t* out) const = 0;
  virtual void canonicalize(std::uint16_t* /*a*/) const {}
  virtual bool valid(const std::uint16_t* a) const = 0;
  virtual std::uint64_t key(const std::uint16_t* a) const = 0;
  // Upper bound on key() + 1, or 0 when keys do not fit a dense table.
  virtual std::uint64_t key_space() const = 0;
};

namespace {

class PermEngine final : public Engine {
 public:
  explicit PermEngine(std::uint32_t n) : n_(n) {
    factorial_.assign(n_ + 1, 1);
    for (std::uint32_t i = 1; i <= n_; ++i) factorial_[i] = factorial_[i - 1] * i;
  }
  std::size_t width() const override { return n_; }
  void identity(std::uint16_t* out) const override {
    for (std::uint32_t i = 0; i < n_; ++i) out[i] = static_cast<std::uint16_t>(i);
  }
  // Left-to-right composition: apply a, then b.
  void multiply(const std::uint16_t* a, const std::uint16_t* b, std::uint16_t* out) const override {
    for (std::uint32_t i = 0; i < n_; ++i) out[i] = b[a[i]];
  }
  void invert(const std::uint16_t* a, std::uint16_t* out) const override {
    for (std::uint32_t i = 0; i < n_; ++i) out[a[i]] = static_cast<std::uint16_t>(i);
  }
  bool valid(const std::uint16_t* a) const override {
    std::vector<bool> seen(n_, false);
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (a[i] >= n_ || seen[a[i]]) return false;
      seen[a[i]] = true;
    }
    return true;
  }
  // Lehmer rank.
  std::uint64_t key(const std::uint16_t* a) const override {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      std::uint64_t smaller = 0;
      for (std::uint32_t j = i + 1; j < n_; ++j) smaller += a[j] < a[i];
      r += smaller * factorial_[n_ - 1 - i];
    }
    return r;
  }
  std::uint64_t key_space() const override { return n_ <= 20 ? factorial_[n_] : 0; }

 private:
  std::uint32_t n_;
  std::vector<std::uint64_t> factorial_;
};

class Mat2Engine final : public Engine {
 public:
  Mat2Engine(FiniteFieldSpec spec, bool projective) : field_(std::move(spec)), projective_(projective) {}
  std::size_t width() const override { return 4; }
  void identity(std::uint16_t* out) const override {
    out[0] = 1;
    out[1] = 0;
    out[2] = 0;
    out[3] = 1;
  }
  void multiply(const std::uint16_t* a, const std::uint16_t* b, std::uint16_t* out) const override {
    const auto& f = field_;
    std::uint16_t r[4];
    r[0] = static_cast<std::uint16_t>(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[2])));
    r[1] = static_cast<std::uint16_t>(f.add(f.mul(a[0], b[1]), f.mul(a[1], b[3])));
    r[2] = static_cast<std::uint16_t>(f.add(f.mul(a[2], b[0]), f.mul(a[3], b[2])));
    r[3] = static_cast<std::uint16_t>(f.add(f.mul(a[2], b[1]), f.mul(a[3], b[3])));
    std::copy(r, r + 4, out);
    canonicalize(out);
  }
  void invert(const std::uint16_t* a, std::uint16_t* out) const override {
    const auto& f = field_;
    const auto det = f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2]));
    const auto di = f.inv(det);
    std::uint16_t r[4];
    r[0] = static_cast<std::uint16_t>(f.mul(di, a[3]));
    r[1] = static_cast<std::uint16_t>(f.mul(di, f.neg(a[1])));
    r[2] = static_cast<std::uint16_t>(f.mul(di, f.neg(a[2])));
    r[3] = static_cast<std::uint16_t>(f.mul(di, a[0]));
    std::copy(r, r + 4, out);
    canonicalize(out);
  }
  // Of {M, -M} keep the lift whose first nonzero entry e satisfies e < -e.
  // In characteristic 2 the lifts coincide.
  void canonicalize(std::uint16_t* a) const override {
    if (!projective_ || field_.characteristic() == 2) return;
    for (int i = 0; i < 4; ++i) {
      if (a[i] == 0) continue;
      if (a[i] > field_.neg(a[i])) {
        for (int j = 0; j < 4; ++j) a[j] = static_cast<std::uint16_t>(field_.neg(a[j]));
      }
      return;
    }
  }
  bool valid(const std::uint16_t* a) const override {
    for (int i = 0; i < 4; ++i) {
      if (a[i] >= field_.q()) return false;
    }
    return field_.sub(field_.mul(a[0], a[3]), field_.mul(a[1], a[2])) != 0;
  }
  std::uint64_t key(const std::uint16_t* a) const override {
    const std::uint64_t q = field_.q();
    return ((static_cast<std::uint64_t>(a[0]) * q + a[1]) * q + a[2]) * q + a[3];
  }
  std::uint64_t key_space() const override {
    const std::uint64_t q = field_.q();
    return q * q * q * q;
  }
  const FiniteField& field() const { return field_; }

 private:
  FiniteField field_;
  bool projective_;
};

}  // namespace

class KeyIndex {
 public:
  explicit KeyIndex(std::uint64_t key_space) {
    if (key_space != 0 && key_space <= (1ULL << 25)) dense_.assign(key_space, kNoIndex);
  }
  Index find(std::uint64_t key) const {
    if (!dense_.empty()) return dense_[key];
    auto it = sparse_.find(key);
    return it == sparse_.end() ? kNoIndex : it->second;
  }
  void set(std::uint64_t key, Index value) {
    if (!dense_.empty()) {
      dense_[key] = value;
    } else {
      sparse_[key] = value;
    }
  }
  void reserve(std::size_t n) {
    if (dense_.empty()) sparse_.reserve(n);
  }

 private:
  std::vector<Index> dense_;
  std::unordered_map<std::uint64_t, Index> sparse_;
};

}  // namespace detail

namespace {

std::atomic<std::uint64_t> g_next_group_id{1};

std::uint64_t factorial(std::uint32_t n) {
  std::uint64_t f = 1;
  for (std::uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

Permutation cycle_perm(std::uint32_t n, std::initializer_list<std::uint32_t> points) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::uint32_t> pts(points);
  for (std::size_t i = 0; i < pts.size(); ++i) p[pts[i]] = static_cast<std::uint16_t>(pts[(i + 1) % pts.size()]);
  return p;
}

Permutation long_cycle(std::uint32_t n, std::uint32_t first) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::uint32_t i = first; i < n; ++i) p[i] = static_cast<std::uint16_t>(i + 1 < n ? i + 1 : first);
  return p;
}

std::vector<Permutation> named_perm_generators(const GroupSpec& spec) {
  const std::uint32_t n = spec.degree;
  if (spec.kind == GroupKind::symmetric) return {cycle_perm(n, {0, 1}), long_cycle(n, 0)};
  // Alt(n): (1 2 3) with (1 2 ... n) for odd n, (2 3 ... n) for even n.
  if (n == 3) return {cycle_perm(n, {0, 1, 2})};
  return {cycle_perm(n, {0, 1, 2}), long_cycle(n, n % 2 == 1 ? 0 : 1)};
}

std::vector<Matrix2> named_mat_generators(const FiniteFieldSpec& field) {
  // Upper and lower transvections over a GF(p)-basis generate SL2(q).
  std::vector<Matrix2> gens;
  std::uint32_t basis = 1;
  for (std::uint32_t i = 0; i < field.k; ++i, basis *= field.p) {
    gens.push_back({1, basis, 0, 1});
    gens.push_back({1, 0, basis, 1});
  }
  return gens;
}

}  // namespace

GroupSpec GroupSpec::alternating(std::uint32_t n) {
  GroupSpec s;
  s.kind = GroupKind::alternating;
  s.degree = n;
  s.max_order = default_max_order();
  return s;
}

GroupSpec GroupSpec::symmetric(std::uint32_t n) {
  GroupSpec s = alternating(n);
  s.kind = GroupKind::symmetric;
  return s;
}

GroupSpec GroupSpec::sl2(std::uint32_t q) {
  GroupSpec s;
  s.kind = GroupKind::sl2;
  s.q = q;
  s.max_order = default_max_order();
  std::uint32_t p = 0;
  std::uint32_t k = 0;
  if (prime_power(q, p, k)) s.field = ff_make(p, k);
  return s;
}

GroupSpec GroupSpec::psl2(std::uint32_t q) {
  GroupSpec s = sl2(q);
  s.kind = GroupKind::psl2;
  return s;
}

GroupSpec GroupSpec::generated(std::vector<Permutation> generators, std::uint32_t degree) {
  GroupSpec s;
  s.kind = GroupKind::generated_perm;
  s.degree = degree;
  s.perm_generators = std::move(generators);
  s.max_order = default_max_order();
  return s;
}

GroupSpec GroupSpec::generated(std::vector<Matrix2> generators, FiniteFieldSpec field) {
  GroupSpec s;
  s.kind = GroupKind::generated_mat2;
  s.q = field.size();
  s.field = std::move(field);
  s.mat_generators = std::move(generators);
  s.max_order = default_max_order();
  return s;
}

std::string GroupSpec::label() const {
  if (!text.empty()) return text;
  switch (kind) {
    case GroupKind::alternating: return "A:" + std::to_string(degree);
    case GroupKind::symmetric: return "S:" + std::to_string(degree);
    case GroupKind::sl2: return "SL2:" + std::to_string(q);
    case GroupKind::psl2: return "PSL2:" + std::to_string(q);
    case GroupKind::generated_perm: return "permgen:" + std::to_string(perm_generators.size()) + "@" + std::to_string(degree);
    case GroupKind::generated_mat2: return "matgen:" + std::to_string(mat_generators.size()) + ",q=" + std::to_string(q);
  }
  return "?";
}

std::optional<std::uint64_t> GroupSpec::predicted_order() const {
  const std::uint64_t qq = q;
  switch (kind) {
    case GroupKind::alternating: return degree <= 20 ? std::optional(factorial(degree) / 2) : std::nullopt;
    case GroupKind::symmetric: return degree <= 20 ? std::optional(factorial(degree)) : std::nullopt;
    case GroupKind::sl2: return qq * (qq * qq - 1);
    case GroupKind::psl2: return qq * (qq * qq - 1) / (qq % 2 == 1 ? 2 : 1);
    default: return std::nullopt;
  }
}

void GroupSpec::validate() const {
  auto unsupported = [&](const std::string& why) { fail(Errc::unsupported_parameters, label() + ": " + why); };
  switch (kind) {
    case GroupKind::alternating:
    case GroupKind::symmetric:
      if (degree < 3 || degree > 12) unsupported("degree must satisfy 3 <= n <= 12");
      break;
    case GroupKind::sl2:
    case GroupKind::psl2: {
      std::uint32_t p = 0;
      std::uint32_t k = 0;
      if (!prime_power(q, p, k)) unsupported("q must be a prime power");
      if (q < 4) unsupported("q must be at least 4");
      if (q >= (1U << 16)) unsupported("q must be below 2^16");
      break;
    }
    case GroupKind::generated_perm:
      if (degree == 0 || degree > 20) unsupported("permutation degree must satisfy 1 <= n <= 20");
      for (const auto& g : perm_generators) {
        if (g.size() != degree) unsupported("generator degree mismatch");
      }
      break;
    case GroupKind::generated_mat2:
      if (field.size() < 2 || field.size() >= (1U << 16)) unsupported("field size must be below 2^16");
      break;
  }
  if (const auto n = predicted_order(); n && *n > max_order) {
    fail(Errc::cap_exceeded, label() + ": order " + std::to_string(*n) + " exceeds the cap " + std::to_string(max_order));
  }
}

GroupTable::GroupTable() = default;
GroupTable::GroupTable(GroupTable&&) noexcept = default;
GroupTable& GroupTable::operator=(GroupTable&&) noexcept = default;
GroupTable::~GroupTable() = default;

bool GroupTable::is_permutation_group() const {
  return spec_.kind == GroupKind::alternating || spec_.kind == GroupKind::symmetric ||
         spec_.kind == GroupKind::generated_perm;
}

const FiniteField* GroupTable::field() const {
  if (is_permutation_group()) return nullptr;
  return &static_cast<const detail::Mat2Engine&>(*engine_).field();
}

GroupTable GroupTable::build(const GroupSpec& spec) {
  spec.validate();
  if (auto predicted = spec.predicted_order(); predicted && *predicted > spec.max_order) {
    fail(Errc::cap_exceeded, spec.label() + ": order " + std::to_string(*predicted) + " exceeds cap " +
                                 std::to_string(spec.max_order));
  }

  GroupTable table;
  table.id_ = g_next_group_id.fetch_add(1);
  table.spec_ = spec;

  std::vector<std::vector<std::uint16_t>> gens;
  if (table.is_permutation_group()) {
    auto engine = std::make_shared<detail::PermEngine>(spec.degree);
    auto perms = spec.kind == GroupKind::generated_perm ? spec.perm_generators : named_perm_generators(spec);
    for (auto& p : perms) {
      if (!engine->valid(p.data())) fail(Errc::invalid_argument, "generator is not a permutation");
      gens.emplace_back(p.begin(), p.end());
    }
    table.engine_ = engine;
  } else {
    const bool projective = spec.kind == GroupKind::psl2;
    auto engine = std::make_shared<detail::Mat2Engine>(spec.field, projective);
    auto mats = spec.kind == GroupKind::generated_mat2 ? spec.mat_generators : named_mat_generators(spec.field);
    for (const auto& m : mats) {
      std::vector<std::uint16_t> e(m.begin(), m.end());
      for (auto v : m) {
        if (v >= spec.field.size()) fail(Errc::invalid_argument, "matrix entry outside the field");
      }
      if (!engine->valid(e.data())) fail(Errc::invalid_argument, "generator matrix is singular");
      engine->canonicalize(e.data());
      gens.push_back(std::move(e));
    }
    table.engine_ = engine;
  }
  const detail::Engine& eng = *table.engine_;
  const std::size_t w = eng.width();
  table.width_ = w;

  // Breadth-first closure under right multiplication by generators.
  std::vector<std::uint16_t> found(w);
  eng.identity(found.data());
  detail::KeyIndex seen(eng.key_space());
  seen.set(eng.key(found.data()), 0);
  std::vector<std::uint16_t> scratch(w);
  std::size_t count = 1;
  for (std::size_t head = 0; head < count; ++head) {
    for (const auto& g : gens) {
      eng.multiply(found.data() + head * w, g.data(), scratch.data());
      const std::uint64_t key = eng.key(scratch.data());
      if (seen.find(key) != kNoIndex) continue;
      if (count + 1 > spec.max_order) {
        fail(Errc::cap_exceeded, spec.label() + ": order exceeds cap " + std::to_string(spec.max_order));
      }
      seen.set(key, static_cast<Index>(count));
      found.insert(found.end(), scratch.begin(), scratch.end());
      ++count;
    }
  }
  table.order_ = static_cast<Index>(count);
  table.degenerate_ = count == 1;

  // Identity first, then lexicographic by canonical entries.
  std::vector<Index> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin() + 1, perm.end(), [&](Index a, Index b) {
    return std::lexicographical_compare(found.begin() + a * w, found.begin() + (a + 1) * w, found.begin() + b * w,
                                        found.begin() + (b + 1) * w);
  });
  table.data_.resize(count * w);
  table.lookup_ = std::make_unique<detail::KeyIndex>(eng.key_space());
  table.lookup_->reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::copy(found.begin() + perm[i] * w, found.begin() + (perm[i] + 1) * w, table.data_.begin() + i * w);
    table.lookup_->set(eng.key(table.data_.data() + i * w), static_cast<Index>(i));
  }
  found.clear();
  found.shrink_to_fit();

  table.inverse_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    eng.invert(table.data_.data() + i * w, scratch.data());
    table.inverse_[i] = table.lookup_->find(eng.key(scratch.data()));
  }
  for (const auto& g : gens) {
    const Index gi = table.lookup_->find(eng.key(g.data()));
    if (std::find(table.generators_.begin(), table.generators_.end(), gi) == table.generators_.end() && gi != 0) {
      table.generators_.push_back(gi);
    }
  }

  if (count <= 2048) {
    table.mul_table_.resize(count * count);
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        eng.multiply(table.data_.data() + a * w, table.data_.data() + b * w, scratch.data());
        table.mul_table_[a * count + b] = table.lookup_->find(eng.key(scratch.data()));
      }
    }
  }
  return table;
}

Index GroupTable::mul(Index a, Index b) const {
  if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * order_ + b];
  std::uint16_t scratch[32];
  engine_->multiply(data_.data() + static_cast<std::size_t>(a) * width_, data_.data() + static_cast<std::size_t>(b) * width_,
                    scratch);
  return lookup_->find(engine_->key(scratch));
}

Index GroupTable::pow(Index g, std::uint64_t m) const {
  Index result = 0;
  Index base = g;
  while (m > 0) {
    if (m & 1U) result = mul(result, base);
    base = mul(base, base);
    m >>= 1U;
  }
  return result;
}

std::uint32_t GroupTable::element_order(Index g) const {
  std::uint32_t o = 1;
  for (Index x = g; x != 0; x = mul(x, g)) ++o;
  return o;
}

Element GroupTable::element(Index i) const {
  auto e = entries(i);
  return Element{id_, std::vector<std::uint16_t>(e.begin(), e.end())};
}

std::optional<Index> GroupTable::find(std::span<const std::uint16_t> e) const {
  if (e.size() != width_ || !engine_->valid(e.data())) return std::nullopt;
  const Index i = lookup_->find(engine_->key(e.data()));
  if (i == kNoIndex) return std::nullopt;
  if (!std::equal(e.begin(), e.end(), entries(i).begin())) return std::nullopt;
  return i;
}

Index GroupTable::index_of_raw(std::vector<std::uint16_t> e) const {
  if (e.size() != width_) fail(Errc::invalid_argument, "element has wrong width for " + spec_.label());
  if (!engine_->valid(e.data())) fail(Errc::invalid_argument, "malformed element for " + spec_.label());
  engine_->canonicalize(e.data());
  auto i = find(e);
  if (!i) fail(Errc::invalid_argument, "element is not in " + spec_.label());
  return *i;
}

Index GroupTable::index_of(const Element& e) const {
  if (e.group_id != id_) fail(Errc::mixed_groups, "element belongs to a different group table");
  auto i = find(e.entries);
  if (!i) fail(Errc::invalid_argument, "element is not canonical in " + spec_.label());
  return *i;
}

Element GroupTable::mul(const Element& a, const Element& b) const { return element(mul(index_of(a), index_of(b))); }

Element GroupTable::inv(const Element& a) const { return element(inv(index_of(a))); }

std::string GroupTable::hex(Index i) const {
  static const char* digits = "0123456789abcdef";
  const bool wide = !is_permutation_group() && spec_.field.size() > 256;
  std::string out;
  for (auto v : entries(i)) {
    if (wide) {
      out += digits[(v >> 12U) & 15U];
      out += digits[(v >> 8U) & 15U];
    }
    out += digits[(v >> 4U) & 15U];
    out += digits[v & 15U];
  }
  return out;
}

std::string GroupTable::describe(Index i) const {
  auto e = entries(i);
  std::ostringstream os;
  if (!is_permutation_group()) {
    os << "[" << e[0] << "," << e[1] << ";" << e[2] << "," << e[3] << "]";
    return os.str();
  }
  std::vector<bool> done(width_, false);
  bool any = false;
  for (std::size_t s = 0; s < width_; ++s) {
    if (done[s] || e[s] == s) continue;
    any = true;
    os << "(";
    std::size_t x = s;
    bool first = true;
    while (!done[x]) {
      done[x] = true;
      if (!first) os << " ";
      first = false;
      os << x + 1;
      x = e[x];
    }
    os << ")";
  }
  if (!any) os << "()";
  return os.str();
}

Permutation parse_cycles(const std::string& text, std::uint32_t degree) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::uint32_t max_point = 0;
  std::size_t pos = 0;
  auto syntax = [&](const std::string& why) { fail(Errc::spec_syntax, "cycle notation '" + text + "': " + why); };
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++pos;
      continue;
    }
    if (c != '(') syntax("expected '('");
    const std::size_t close = text.find(')', pos);
    if (close == std::string::npos) syntax("unbalanced parenthesis");
    std::string body = text.substr(pos + 1, close - pos - 1);
    for (char& ch : body) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream is(body);
    std::vector<std::uint32_t> cyc;
    std::string tok;
    while (is >> tok) {
      if (tok.find_first_not_of("0123456789") != std::string::npos) syntax("bad point '" + tok + "'");
      const unsigned long v = std::stoul(tok);
      if (v == 0 || v > 64) syntax("point out of range");
      cyc.push_back(static_cast<std::uint32_t>(v - 1));
      max_point = std::max<std::uint32_t>(max_point, static_cast<std::uint32_t>(v));
    }
    cycles.push_back(std::move(cyc));
    pos = close + 1;
  }
  if (degree == 0) degree = std::max<std::uint32_t>(max_point, 1);
  if (max_point > degree) syntax("point exceeds degree");
  Permutation p(degree);
  std::iota(p.begin(), p.end(), 0);
  // Cycles compose left to right, matching the group law.
  for (const auto& cyc : cycles) {
    std::vector<bool> seen(degree, false);
    for (auto v : cyc) {
      if (seen[v]) syntax("repeated point in a cycle");
      seen[v] = true;
    }
    Permutation c(degree);
    std::iota(c.begin(), c.end(), 0);
    for (std::size_t i = 0; i < cyc.size(); ++i) c[cyc[i]] = static_cast<std::uint16_t>(cyc[(i + 1) % cyc.size()]);
    Permutation next(degree);
    for (std::uint32_t i = 0; i < degree; ++i) next[i] = c[p[i]];
    p = std::move(next);
  }
  return p;
}

}  // namespace mixer
