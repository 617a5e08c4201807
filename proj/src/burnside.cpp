#include "tetra/burnside.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "tetra/errors.hpp"

namespace tetra::burnside {

namespace {

struct PermTables {
  int mul[24][24];
  int inv[24];
  int cls[24];
};

const PermTables& ptab() {
  static const PermTables t = [] {
    PermTables t{};
    const auto& all = grouprep::all_permutations();
    for (int i = 0; i < 24; ++i) {
      for (int j = 0; j < 24; ++j) t.mul[i][j] = (all[i] * all[j]).index();
      t.inv[i] = all[i].inverse().index();
      t.cls[i] = all[i].cycle_class();
    }
    return t;
  }();
  return t;
}

S4Mask conj_mask(S4Mask h, int g) {
  const auto& t = ptab();
  S4Mask out = 0;
  for (int i = 0; i < 24; ++i)
    if (h >> i & 1u) out |= 1u << t.mul[t.mul[g][i]][t.inv[g]];
  return out;
}

std::string name_for(S4Mask h) {
  const auto& t = ptab();
  switch (std::popcount(h)) {
    case 1: return "Z1";
    case 2:
      for (int i = 1; i < 24; ++i)
        if (h >> i & 1u) return t.cls[i] == 1 ? "D1" : "Z2";
      break;
    case 3: return "Z3";
    case 4: {
      bool four_cycle = false, transposition = false;
      for (int i = 1; i < 24; ++i)
        if (h >> i & 1u) {
          four_cycle |= t.cls[i] == 4;
          transposition |= t.cls[i] == 1;
        }
      return four_cycle ? "Z4" : (transposition ? "D2" : "V4");
    }
    case 6: return "D3";
    case 8: return "D4";
    case 12: return "A4";
    case 24: return "S4";
  }
  throw DomainError("not a subgroup of S4");
}

std::vector<Permutation> rep_generators(const std::string& name) {
  auto P = [](const char* c) { return Permutation::parse(c); };
  if (name == "Z1") return {};
  if (name == "Z2") return {P("(12)(34)")};
  if (name == "D1") return {P("(12)")};
  if (name == "Z3") return {P("(123)")};
  if (name == "Z4") return {P("(1324)")};
  if (name == "V4") return {P("(12)(34)"), P("(13)(24)")};
  if (name == "D2") return {P("(12)"), P("(34)")};
  if (name == "D3") return {P("(123)"), P("(12)")};
  if (name == "D4") return {P("(1324)"), P("(12)")};
  if (name == "A4") return {P("(123)"), P("(12)(34)")};
  return {P("(1234)"), P("(12)")};
}

int name_rank(const std::string& n) {
  static const std::vector<std::string> order{"Z1", "Z2", "D1", "Z3", "Z4", "V4", "D2", "D3", "D4", "A4", "S4"};
  return static_cast<int>(std::find(order.begin(), order.end(), n) - order.begin());
}

std::vector<int> divisor_closure(const std::vector<int>& folds) {
  std::set<int> out;
  for (int f : folds) {
    if (f < 1) throw DomainError("fold must be positive");
    for (int d = 1; d <= f; ++d)
      if (f % d == 0) out.insert(d);
  }
  return {out.begin(), out.end()};
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Collapse internal whitespace runs so that labels compare loosely.
std::string squash(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty() && out.back() != '(') out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

// --- S4 subgroups -------------------------------------------------------

S4Mask s4_generate(const std::vector<Permutation>& gens) {
  const auto& t = ptab();
  S4Mask m = 1u;
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    const int x = frontier.back();
    frontier.pop_back();
    for (const auto& g : gens) {
      const int y = t.mul[x][g.index()];
      if (!(m >> y & 1u)) {
        m |= 1u << y;
        frontier.push_back(y);
      }
    }
  }
  return m;
}

int s4_order(S4Mask h) { return std::popcount(h); }
bool s4_contains(S4Mask h, const Permutation& p) { return h >> p.index() & 1u; }

const std::vector<S4Mask>& s4_subgroups() {
  static const std::vector<S4Mask> subs = [] {
    const auto& all = grouprep::all_permutations();
    std::set<std::pair<int, S4Mask>> found;
    for (int a = 0; a < 24; ++a)
      for (int b = a; b < 24; ++b) {
        const S4Mask m = s4_generate({all[a], all[b]});
        found.insert({std::popcount(m), m});
      }
    std::vector<S4Mask> out;
    for (auto [o, m] : found) out.push_back(m);
    return out;
  }();
  return subs;
}

const std::vector<S4Class>& s4_classes() {
  static const std::vector<S4Class> classes = [] {
    std::vector<S4Class> out;
    std::set<S4Mask> seen;
    for (S4Mask m : s4_subgroups()) {
      if (seen.count(m)) continue;
      S4Class c;
      c.name = name_for(m);
      std::set<S4Mask> orbit;
      for (int g = 0; g < 24; ++g) orbit.insert(conj_mask(m, g));
      c.members.assign(orbit.begin(), orbit.end());
      seen.insert(orbit.begin(), orbit.end());
      c.generators = rep_generators(c.name);
      c.representative = s4_generate(c.generators);
      if (!orbit.count(c.representative) || name_for(c.representative) != c.name)
        throw ConsistencyError("S4 subgroup representative for " + c.name + " is not in its class");
      for (int g = 0; g < 24; ++g)
        if (conj_mask(c.representative, g) == c.representative) c.normalizer |= 1u << g;
      out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const S4Class& a, const S4Class& b) { return name_rank(a.name) < name_rank(b.name); });
    for (std::size_t i = 0; i < out.size(); ++i)
      if (name_rank(out[i].name) != static_cast<int>(i)) throw ConsistencyError("S4 subgroup classes are not named uniquely");
    return out;
  }();
  return classes;
}

int s4_class_of(S4Mask h) {
  const auto& cs = s4_classes();
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (std::find(cs[i].members.begin(), cs[i].members.end(), h) != cs[i].members.end()) return static_cast<int>(i);
  throw DomainError("mask is not a subgroup of S4");
}

const std::string& s4_name(S4Mask h) { return s4_classes()[s4_class_of(h)].name; }

// --- Burnside elements --------------------------------------------------

BurnsideElement BurnsideElement::term(int id, Coeff c) {
  BurnsideElement e;
  e.add(id, c);
  return e;
}

Coeff BurnsideElement::coeff(int id) const {
  auto it = terms_.find(id);
  return it == terms_.end() ? 0 : it->second;
}

void BurnsideElement::add(int id, Coeff c) {
  if (c == 0) return;
  auto& v = terms_[id];
  v += c;
  if (v == 0) terms_.erase(id);
}

BurnsideElement BurnsideElement::operator+(const BurnsideElement& o) const {
  BurnsideElement r = *this;
  for (auto [id, c] : o.terms_) r.add(id, c);
  return r;
}

BurnsideElement BurnsideElement::operator-(const BurnsideElement& o) const { return *this + (-o); }

BurnsideElement BurnsideElement::operator-() const { return *this * -1; }

BurnsideElement BurnsideElement::operator*(Coeff k) const {
  BurnsideElement r;
  for (auto [id, c] : terms_) r.add(id, c * k);
  return r;
}

// --- class table --------------------------------------------------------

struct ClassTable::Memo {
  std::mutex mu;
  std::unordered_map<std::uint64_t, int> n_count;
  std::map<std::pair<int, int>, BurnsideElement> products;
  std::map<std::pair<int, int>, BurnsideElement> degrees;
};

ClassTable::ClassTable(ClassTable&&) noexcept = default;
ClassTable& ClassTable::operator=(ClassTable&&) noexcept = default;
ClassTable::~ClassTable() = default;

ClassTable ClassTable::for_modes(const std::vector<int>& modes) {
  std::vector<int> folds;
  for (int l : modes) {
    if (l < 1) throw DomainError("Fourier mode must be >= 1");
    for (int k = 1; k <= 4; ++k) folds.push_back(l * k);
  }
  return ClassTable(folds);
}

std::uint32_t ClassTable::pack(const Permutation& p, int s, int a) const {
  const int am = ((a % R_) + R_) % R_;
  return static_cast<std::uint32_t>((p.index() * 2 + (s & 1)) * R_ + am);
}

std::uint32_t ClassTable::pack_turn(const Permutation& p, int s, int num, int den) const {
  if (den == 0 || (static_cast<long long>(num) * R_) % den != 0)
    throw DomainError("angle " + std::to_string(num) + "/" + std::to_string(den) + " of a turn is off the grid");
  return pack(p, s, static_cast<int>(static_cast<long long>(num) * R_ / den));
}

Permutation ClassTable::perm_of(std::uint32_t x) const { return Permutation::from_index(static_cast<int>(x / (2 * R_))); }
int ClassTable::refl_of(std::uint32_t x) const { return static_cast<int>(x / R_) % 2; }
int ClassTable::angle_of(std::uint32_t x) const { return static_cast<int>(x % R_); }

std::uint32_t ClassTable::mul(std::uint32_t x, std::uint32_t y) const {
  const auto& t = ptab();
  const int R = R_;
  const int px = x / (2 * R), sx = (x / R) % 2, ax = x % R;
  const int py = y / (2 * R), sy = (y / R) % 2, ay = y % R;
  const int a = ((ax + (sx ? -ay : ay)) % R + R) % R;
  return static_cast<std::uint32_t>((t.mul[px][py] * 2 + (sx ^ sy)) * R + a);
}

std::uint32_t ClassTable::inv(std::uint32_t x) const {
  const auto& t = ptab();
  const int R = R_;
  const int p = x / (2 * R), s = (x / R) % 2, a = x % R;
  const int ai = s ? a : (R - a) % R;
  return static_cast<std::uint32_t>((t.inv[p] * 2 + s) * R + ai);
}

std::vector<std::uint32_t> ClassTable::generate(const std::vector<std::uint32_t>& gens) const {
  std::vector<char> seen(static_cast<std::size_t>(48 * R_), 0);
  std::vector<std::uint32_t> out{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto g : gens) {
      const auto y = mul(out[i], g);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> ClassTable::conjugators(int n) const {
  std::vector<std::uint32_t> out;
  const int step = R_ / (2 * n);
  for (const auto& p : grouprep::all_permutations())
    for (int s = 0; s < 2; ++s)
      for (int k = 0; k < 2 * n; ++k) out.push_back(pack(p, s, k * step));
  return out;
}

std::vector<std::uint32_t> ClassTable::canonical_key(std::vector<std::uint32_t> elems, S4Mask h, int n) const {
  const S4Mask norm = s4_classes()[s4_class_of(h)].normalizer;
  std::vector<std::uint32_t> best, cur(elems.size());
  for (auto g : conjugators(n)) {
    if (!(norm >> (g / (2 * R_)) & 1u)) continue;
    const auto gi = inv(g);
    for (std::size_t i = 0; i < elems.size(); ++i) cur[i] = mul(mul(g, elems[i]), gi);
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) best = cur;
  }
  return best;
}

void ClassTable::enumerate_fold(int n, O2Kind kind) {
  const Permutation e;
  const int step = R_ / n;
  const bool dihedral = kind == O2Kind::Dihedral;
  std::vector<std::uint32_t> k_gens{pack(e, 0, step)};
  if (dihedral) k_gens.push_back(pack(e, 1, 0));
  const auto k_elems = generate(k_gens);

  std::vector<std::vector<std::uint32_t>> normals;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) normals.push_back({pack(e, 0, R_ / d)});
  if (dihedral) {
    normals.push_back(k_gens);
    if (n % 2 == 0) {
      normals.push_back({pack(e, 0, 2 * step), pack(e, 1, 0)});
      normals.push_back({pack(e, 0, 2 * step), pack(e, 1, step)});
    }
  }

  const std::vector<std::uint32_t> prefix{static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(n)};
  std::set<std::vector<std::uint32_t>> raw_seen;
  for (const auto& hc : s4_classes()) {
    for (const auto& ngens : normals) {
      const auto n_elems = generate(ngens);
      std::vector<std::uint32_t> reps;
      std::set<std::uint32_t> covered;
      for (auto k : k_elems) {
        if (covered.count(k)) continue;
        reps.push_back(k);
        for (auto v : n_elems) covered.insert(mul(k, v));
      }
      const std::size_t ng = hc.generators.size();
      std::size_t combos = 1;
      for (std::size_t i = 0; i < ng; ++i) combos *= reps.size();
      for (std::size_t c = 0; c < combos; ++c) {
        std::vector<std::uint32_t> gens = ngens;
        std::size_t rest = c;
        for (std::size_t i = 0; i < ng; ++i) {
          const auto k = reps[rest % reps.size()];
          rest /= reps.size();
          gens.push_back(mul(pack(hc.generators[i], 0, 0), k));
        }
        auto sub = generate(gens);
        if (!raw_seen.insert(sub).second) continue;
        std::set<std::uint32_t> proj;
        for (auto x : sub) proj.insert(x % (2 * R_));
        if (proj.size() != k_elems.size()) continue;
        auto key = prefix;
        const auto ck = canonical_key(sub, hc.representative, n);
        key.insert(key.end(), ck.begin(), ck.end());
        if (keys_.count(key)) continue;
        AmalgamClass cls;
        cls.kind = kind;
        cls.fold = n;
        cls.elements = std::move(sub);
        cls.generators = gens;
        keys_.emplace(std::move(key), static_cast<int>(classes_.size()));
        classes_.push_back(std::move(cls));
      }
    }
  }
}

ClassTable::ClassTable(const std::vector<int>& folds) : memo_(std::make_unique<Memo>()) {
  folds_ = divisor_closure(folds);
  if (folds_.empty()) throw DomainError("empty fold set");
  int l = 1;
  for (int f : folds_) l = std::lcm(l, f);
  R_ = 2 * l;

  AmalgamClass unit;
  unit.kind = O2Kind::O2;
  unit.H = unit.Z = unit.R = s4_classes().back().representative;
  unit.L = "Z1";
  unit.K = "O2";
  unit.weyl = 1;
  unit.canonical = "S4^S4_S4:Z1:O2";
  unit.printed = "(S4 x O2)";
  classes_.push_back(unit);

  for (int n : folds_) {
    enumerate_fold(n, O2Kind::Dihedral);
    enumerate_fold(n, O2Kind::Cyclic);
  }

  // Labels and Weyl groups.
  norm_size_.assign(classes_.size(), 0);
  for (std::size_t id = 1; id < classes_.size(); ++id) {
    auto& c = classes_[id];
    c.order = static_cast<int>(c.elements.size());
    std::size_t n_size = 0;
    bool n_refl = false;
    for (auto x : c.elements) {
      const int p = x / (2 * R_);
      c.H |= 1u << p;
      if (x % (2 * R_) == 0) c.Z |= 1u << p;
      if (refl_of(x) == 0) c.R |= 1u << p;
      if (p == 0) {
        ++n_size;
        n_refl |= refl_of(x) == 1;
      }
    }
    const int n = c.fold;
    if (c.kind == O2Kind::Dihedral) {
      c.K = "D" + std::to_string(n);
      if (n_refl)
        c.L = n_size == 2 * static_cast<std::size_t>(n) ? "Z1" : "Z2";
      else
        c.L = "D" + std::to_string(n / static_cast<int>(n_size));
    } else {
      c.K = "Z" + std::to_string(n);
      c.L = "Z" + std::to_string(n / static_cast<int>(n_size));
    }
    std::uint32_t count = 0;
    for (auto g : conjugators(n)) {
      const auto gi = inv(g);
      bool ok = true;
      for (auto x : c.generators)
        if (!std::binary_search(c.elements.begin(), c.elements.end(), mul(mul(g, x), gi))) {
          ok = false;
          break;
        }
      count += ok;
    }
    norm_size_[id] = count;
    if (c.kind == O2Kind::Dihedral) {
      if (count % c.order != 0) throw ConsistencyError("normalizer order not divisible by class order");
      c.weyl = static_cast<int>(count / c.order);
    }
    c.canonical = s4_name(c.H) + "^" + s4_name(c.Z) + "_" + s4_name(c.R) + ":" + c.L + ":" + c.K;
  }

  // The R subscript is printed only where it distinguishes classes.
  std::map<std::string, std::set<std::string>> r_variants;
  for (std::size_t id = 1; id < classes_.size(); ++id) {
    const auto& c = classes_[id];
    r_variants[s4_name(c.H) + "|" + s4_name(c.Z) + "|" + c.L + "|" + c.K].insert(s4_name(c.R));
  }
  for (std::size_t id = 1; id < classes_.size(); ++id) {
    auto& c = classes_[id];
    if (c.L == "Z1") {
      c.printed = "(" + s4_name(c.H) + " x " + c.K + ")";
    } else {
      const bool show_r = r_variants[s4_name(c.H) + "|" + s4_name(c.Z) + "|" + c.L + "|" + c.K].size() > 1;
      c.printed = "(" + s4_name(c.H) + "^" + s4_name(c.Z) + (show_r ? "_" + s4_name(c.R) : "") + " x_" + c.L + " " + c.K + ")";
    }
  }

  // Deterministic order: unit, then |H| desc, |K| desc, label.
  std::vector<std::size_t> perm(classes_.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto k_order = [](const AmalgamClass& c) { return c.kind == O2Kind::Dihedral ? 2 * c.fold : c.fold; };
  std::sort(perm.begin() + 1, perm.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = classes_[a];
    const auto& y = classes_[b];
    if (s4_order(x.H) != s4_order(y.H)) return s4_order(x.H) > s4_order(y.H);
    if (k_order(x) != k_order(y)) return k_order(x) > k_order(y);
    if (x.kind != y.kind) return x.kind == O2Kind::Dihedral;
    return x.canonical < y.canonical;
  });
  std::vector<int> new_id(classes_.size());
  std::vector<AmalgamClass> sorted;
  std::vector<std::uint32_t> sorted_norm;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    new_id[perm[i]] = static_cast<int>(i);
    sorted.push_back(std::move(classes_[perm[i]]));
    sorted_norm.push_back(norm_size_[perm[i]]);
    sorted.back().id = static_cast<int>(i);
  }
  classes_ = std::move(sorted);
  norm_size_ = std::move(sorted_norm);
  for (auto& [key, id] : keys_) id = new_id[id];

  for (const auto& c : classes_) {
    for (const auto& label : {c.canonical, c.printed}) {
      auto [it, fresh] = lookup_.emplace(label, c.id);
      if (!fresh && it->second != c.id) throw ConsistencyError("class label collision: " + label);
    }
  }

  by_order_.resize(classes_.size());
  std::iota(by_order_.begin(), by_order_.end(), 0);
  std::stable_sort(by_order_.begin() + 1, by_order_.end(),
                   [&](int a, int b) { return classes_[a].order > classes_[b].order; });
}

int ClassTable::classify(const std::vector<std::uint32_t>& gens) const {
  auto sub = generate(gens);
  std::set<int> rot;
  int refl_angle = -1;
  S4Mask h = 0;
  for (auto x : sub) {
    h |= 1u << (x / (2 * R_));
    if (refl_of(x) == 0)
      rot.insert(angle_of(x));
    else
      refl_angle = angle_of(x);
  }
  const int n = static_cast<int>(rot.size());
  if (!std::binary_search(folds_.begin(), folds_.end(), n))
    throw DomainError("subgroup has O(2) fold " + std::to_string(n) + " outside the table");
  const auto& hc = s4_classes()[s4_class_of(h)];
  int sigma = -1;
  for (int g = 0; g < 24 && sigma < 0; ++g)
    if (conj_mask(h, g) == hc.representative) sigma = g;
  int b = 0;
  if (refl_angle >= 0) {
    const int theta = refl_angle % (R_ / n);
    if (theta % 2 != 0) throw DomainError("reflection axis off the conjugation grid");
    b = -theta / 2;
  }
  const auto g = pack(Permutation::from_index(sigma), 0, b);
  const auto gi = inv(g);
  for (auto& x : sub) x = mul(mul(g, x), gi);
  const O2Kind kind = refl_angle >= 0 ? O2Kind::Dihedral : O2Kind::Cyclic;
  std::vector<std::uint32_t> key{static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(n)};
  const auto ck = canonical_key(std::move(sub), hc.representative, n);
  key.insert(key.end(), ck.begin(), ck.end());
  auto it = keys_.find(key);
  if (it == keys_.end()) throw DomainError("subgroup class not found in table");
  return it->second;
}

int ClassTable::find(std::string_view label) const {
  const std::string s = squash(label);
  if (auto it = lookup_.find(s); it != lookup_.end()) return it->second;
  if (auto it = lookup_.find("(" + s + ")"); it != lookup_.end()) return it->second;
  throw DomainError("unknown class label: " + s);
}

int ClassTable::n_count(int L, int K) const {
  const auto& cl = classes_.at(L);
  const auto& ck = classes_.at(K);
  if (ck.is_unit()) return 1;
  if (cl.is_unit()) return 0;
  if (cl.kind == O2Kind::Cyclic && ck.kind == O2Kind::Dihedral)
    throw DomainError("n(L,K) is infinite for a cyclic L below a dihedral K");
  if (ck.fold % cl.fold != 0 || ck.order % cl.order != 0) return 0;
  if (cl.kind == O2Kind::Dihedral && ck.kind == O2Kind::Cyclic) return 0;
  if (L == K) return 1;

  const std::uint64_t key = static_cast<std::uint64_t>(L) << 32 | static_cast<std::uint32_t>(K);
  {
    std::lock_guard lock(memo_->mu);
    if (auto it = memo_->n_count.find(key); it != memo_->n_count.end()) return it->second;
  }
  std::uint32_t count = 0;
  for (auto g : conjugators(ck.fold)) {
    const auto gi = inv(g);
    bool ok = true;
    for (auto x : cl.generators)
      if (!std::binary_search(ck.elements.begin(), ck.elements.end(), mul(mul(gi, x), g))) {
        ok = false;
        break;
      }
    count += ok;
  }
  if (count % norm_size_[K] != 0) throw ConsistencyError("conjugate count is not a multiple of the normalizer order");
  const int n = static_cast<int>(count / norm_size_[K]);
  std::lock_guard lock(memo_->mu);
  memo_->n_count[key] = n;
  return n;
}

int ClassTable::fixed_point_dim_of(int j, int l, const std::vector<std::uint32_t>& elements) const {
  if (j < 0 || j > 4 || l < 1) throw DomainError("representation index out of range");
  double sum = 0.0;
  for (auto x : elements) {
    if (refl_of(x)) continue;
    const int chi = grouprep::CharacterTable::chi[j][ptab().cls[x / (2 * R_)]];
    sum += chi * 2.0 * std::cos(2.0 * std::numbers::pi * l * angle_of(x) / R_);
  }
  const double avg = sum / static_cast<double>(elements.size());
  const double r = std::round(avg);
  if (std::abs(avg - r) > 1e-9) throw ConsistencyError("non-integral fixed-point dimension " + std::to_string(avg));
  return static_cast<int>(r);
}

int ClassTable::fixed_point_dim(int j, int l, int cls) const {
  const auto& c = classes_.at(cls);
  if (c.is_unit()) return 0;
  return fixed_point_dim_of(j, l, c.elements);
}

int ClassTable::rescale(int cls, int k) const {
  const auto& c = classes_.at(cls);
  if (k < 1) throw DomainError("rescaling factor must be positive");
  if (c.is_unit() || k == 1) return cls;
  if (R_ % k != 0) throw DomainError("rescaled class is outside the table");
  std::vector<std::uint32_t> gens{pack(Permutation{}, 0, R_ / k)};
  for (auto x : c.generators) {
    if (angle_of(x) % k != 0) throw DomainError("rescaled class is outside the table");
    gens.push_back(pack(perm_of(x), refl_of(x), angle_of(x) / k));
  }
  return classify(gens);
}

BurnsideElement ClassTable::product_of_classes(int a, int b) const {
  if (a > b) std::swap(a, b);
  {
    std::lock_guard lock(memo_->mu);
    if (auto it = memo_->products.find({a, b}); it != memo_->products.end()) return it->second;
  }
  const auto& A = classes_[a];
  const auto& B = classes_[b];
  BurnsideElement out;
  const int g = std::gcd(A.fold, B.fold);
  const int cap = std::min(A.order, B.order);
  for (int L : by_order_) {
    const auto& cl = classes_[L];
    if (!cl.phi0() || cl.is_unit() || g % cl.fold != 0 || cl.order > cap) continue;
    const Coeff na = n_count(L, a);
    if (na == 0) continue;
    const Coeff nb = n_count(L, b);
    if (nb == 0) continue;
    Coeff v = na * *A.weyl * nb * *B.weyl;
    for (auto [I, ci] : out.terms())
      if (classes_[I].order > cl.order) v -= n_count(L, I) * ci * *classes_[I].weyl;
    if (v % *cl.weyl != 0) throw ConsistencyError("non-exact division in Burnside product at " + cl.printed);
    out.add(L, v / *cl.weyl);
  }
  std::lock_guard lock(memo_->mu);
  memo_->products.emplace(std::make_pair(a, b), out);
  return out;
}

BurnsideElement ClassTable::multiply(const BurnsideElement& x, const BurnsideElement& y) const {
  BurnsideElement out;
  for (auto [a, ca] : x.terms())
    for (auto [b, cb] : y.terms()) {
      if (!classes_.at(a).phi0() || !classes_.at(b).phi0())
        throw DomainError("Burnside product of a class with infinite Weyl group");
      if (a == unit()) {
        out.add(b, ca * cb);
      } else if (b == unit()) {
        out.add(a, ca * cb);
      } else {
        out = out + product_of_classes(a, b) * (ca * cb);
      }
    }
  return out;
}

BurnsideElement ClassTable::pi0(const BurnsideElement& x) const {
  BurnsideElement out;
  for (auto [id, c] : x.terms())
    if (classes_.at(id).phi0()) out.add(id, c);
  return out;
}

BurnsideElement ClassTable::basic_degree(int j, int l) const {
  if (j < 0 || j > 4 || l < 1) throw DomainError("representation index out of range");
  for (int k = 1; k <= 4; ++k)
    if (!std::binary_search(folds_.begin(), folds_.end(), k * l))
      throw DomainError("class table lacks fold " + std::to_string(k * l) + " needed for mode " + std::to_string(l));
  {
    std::lock_guard lock(memo_->mu);
    if (auto it = memo_->degrees.find({j, l}); it != memo_->degrees.end()) return it->second;
  }
  BurnsideElement out;
  for (int H : by_order_) {
    const auto& ch = classes_[H];
    if (!ch.phi0()) continue;
    Coeff v = fixed_point_dim(j, l, H) % 2 == 0 ? 1 : -1;
    for (auto [K, ck] : out.terms()) {
      const auto& kk = classes_[K];
      if (kk.is_unit() || (!ch.is_unit() && kk.order > ch.order)) v -= ck * n_count(H, K) * *kk.weyl;
    }
    if (v % *ch.weyl != 0) throw ConsistencyError("non-exact division in basic degree at " + ch.printed);
    out.add(H, v / *ch.weyl);
  }
  std::lock_guard lock(memo_->mu);
  memo_->degrees.emplace(std::make_pair(j, l), out);
  return out;
}

std::vector<int> ClassTable::maximal(const BurnsideElement& x) const {
  std::vector<int> out;
  for (auto [a, ca] : x.terms()) {
    bool top = true;
    for (auto [b, cb] : x.terms())
      if (a != b && leq(a, b)) {
        top = false;
        break;
      }
    if (top) out.push_back(a);
  }
  return out;
}

std::string ClassTable::format(const BurnsideElement& x) const {
  if (x.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (auto [id, c] : x.terms()) {
    const Coeff m = c < 0 ? -c : c;
    if (first)
      s += c < 0 ? "-" : "";
    else
      s += c < 0 ? " - " : " + ";
    if (m != 1) s += std::to_string(m);
    s += classes_.at(id).printed;
    first = false;
  }
  return s;
}

BurnsideElement ClassTable::parse(std::string_view text) const {
  BurnsideElement out;
  const std::string t = trim(text);
  if (t == "0") return out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
  };
  while (true) {
    skip();
    if (i >= t.size()) break;
    Coeff sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      sign = t[i] == '-' ? -1 : 1;
      ++i;
      skip();
    }
    Coeff m = 0;
    bool digits = false;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
      m = m * 10 + (t[i] - '0');
      digits = true;
      ++i;
    }
    if (!digits) m = 1;
    skip();
    if (i >= t.size() || t[i] != '(') throw DomainError("expected '(' in Burnside element at offset " + std::to_string(i));
    const auto close = t.find(')', i);
    if (close == std::string::npos) throw DomainError("unbalanced parenthesis in Burnside element");
    out.add(find(t.substr(i, close - i + 1)), sign * m);
    i = close + 1;
  }
  return out;
}

}  // namespace tetra::burnside
