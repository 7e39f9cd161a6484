#pragma once

// Exact arithmetic in the groups Z^d and F_r, plus finite-subset algebra.
//
// Elements of both kinds are stored as a short vector of 32-bit integers:
//   Z^d : the coordinate vector (length d)
//   F_r : a freely reduced word of letter codes, generator i has code 2i and
//         its inverse has code 2i+1 (so inverse(code) == code ^ 1)
//
// With that encoding one comparator serves as the canonical total order for
// both kinds: shorter first, then lexicographic on the stored integers. For
// Z^d every element has length d so this is plain lexicographic order on
// coordinates; for F_r it is shortlex with a < a^-1 < b < b^-1 < ...

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace d1 {

/// Raised for any misuse of the library: mismatched groups, shapes, fields.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GroupKind : std::uint8_t { Zd, Free };

inline constexpr int kMaxFreeRank = 26;

struct GroupSpec {
  GroupKind kind = GroupKind::Zd;
  int rank = 1;  // d for Z^d, number of generators for F_r

  static GroupSpec zd(int d) {
    if (d < 1) throw UsageError("Z^d requires d >= 1");
    return {GroupKind::Zd, d};
  }
  static GroupSpec free(int r) {
    if (r < 1 || r > kMaxFreeRank)
      throw UsageError("free group rank must lie in [1, 26]");
    return {GroupKind::Free, r};
  }

  /// "Zd:2" or "free:2".
  std::string to_string() const {
    return (kind == GroupKind::Zd ? "Zd:" : "free:") + std::to_string(rank);
  }

  static GroupSpec parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("bad group spec '" + text + "'");
    std::string head = text.substr(0, colon);
    std::string tail = text.substr(colon + 1);
    char* end = nullptr;
    long value = std::strtol(tail.c_str(), &end, 10);
    if (tail.empty() || *end != '\0') throw UsageError("bad group spec '" + text + "'");
    if (head == "Zd" || head == "zd" || head == "Z") return zd(static_cast<int>(value));
    if (head == "free" || head == "Free" || head == "F") return free(static_cast<int>(value));
    throw UsageError("bad group spec '" + text + "'");
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

class GroupElement {
 public:
  using Storage = boost::container::small_vector<std::int32_t, 6>;

  GroupElement() = default;

  static GroupElement identity(const GroupSpec& spec) {
    GroupElement e;
    e.kind_ = spec.kind;
    if (spec.kind == GroupKind::Zd) e.data_.assign(static_cast<std::size_t>(spec.rank), 0);
    return e;
  }

  static GroupElement zd(std::initializer_list<std::int32_t> coords) {
    return zd(std::vector<std::int32_t>(coords));
  }
  static GroupElement zd(const std::vector<std::int32_t>& coords) {
    GroupElement e;
    e.kind_ = GroupKind::Zd;
    e.data_.assign(coords.begin(), coords.end());
    return e;
  }

  /// Builds a free-group element from letter codes, reducing as it goes.
  static GroupElement free_word(const std::vector<std::int32_t>& codes) {
    GroupElement e;
    e.kind_ = GroupKind::Free;
    for (auto c : codes) e.push_letter(c);
    return e;
  }

  /// Letters a..z are generators, A..Z their inverses. Whitespace is ignored.
  static GroupElement free_word(const std::string& letters) {
    std::vector<std::int32_t> codes;
    for (char ch : letters) {
      if (ch == ' ' || ch == '\t') continue;
      if (ch >= 'a' && ch <= 'z') {
        codes.push_back(2 * (ch - 'a'));
      } else if (ch >= 'A' && ch <= 'Z') {
        codes.push_back(2 * (ch - 'A') + 1);
      } else {
        throw UsageError(std::string("bad free-group letter '") + ch + "'");
      }
    }
    return free_word(codes);
  }

  GroupKind kind() const { return kind_; }
  const Storage& data() const { return data_; }
  std::size_t size() const { return data_.size(); }

  bool is_identity() const {
    if (kind_ == GroupKind::Free) return data_.empty();
    return std::all_of(data_.begin(), data_.end(), [](std::int32_t v) { return v == 0; });
  }

  /// Word length: L1 norm in Z^d, reduced word length in F_r.
  int length() const {
    if (kind_ == GroupKind::Free) return static_cast<int>(data_.size());
    int total = 0;
    for (auto v : data_) total += std::abs(v);
    return total;
  }

  int linf() const {
    int m = 0;
    for (auto v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool belongs_to(const GroupSpec& spec) const {
    if (kind_ != spec.kind) return false;
    if (kind_ == GroupKind::Zd) return static_cast<int>(data_.size()) == spec.rank;
    return std::all_of(data_.begin(), data_.end(),
                       [&](std::int32_t c) { return c >= 0 && c < 2 * spec.rank; });
  }

  /// Canonical order: length first, then lexicographic.
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.data_.size() <=> b.data_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.data_.begin(), a.data_.end(),
                                                  b.data_.begin(), b.data_.end());
  }
  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.kind_ == b.kind_ && a.data_ == b.data_;
  }

  /// Letters for free words, "(x,y,...)" for Z^d.
  std::string to_string() const {
    std::string out;
    if (kind_ == GroupKind::Free) {
      if (data_.empty()) return "1";
      for (auto c : data_) out.push_back(static_cast<char>(((c & 1) ? 'A' : 'a') + c / 2));
      return out;
    }
    out = "(";
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(data_[i]);
    }
    return out + ")";
  }

  /// Letters without the "1" for the identity; used by the JSON layer.
  std::string letters() const {
    std::string out;
    for (auto c : data_) out.push_back(static_cast<char>(((c & 1) ? 'A' : 'a') + c / 2));
    return out;
  }

 private:
  friend GroupElement compose(const GroupElement&, const GroupElement&);
  friend GroupElement inverse(const GroupElement&);

  void push_letter(std::int32_t code) {
    if (code < 0 || code >= 2 * kMaxFreeRank) throw UsageError("bad letter code");
    if (!data_.empty() && data_.back() == (code ^ 1)) {
      data_.pop_back();
    } else {
      data_.push_back(code);
    }
  }

  GroupKind kind_ = GroupKind::Zd;
  Storage data_;
};

inline GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (g.kind_ != h.kind_) throw UsageError("compose: elements of different groups");
  GroupElement out;
  out.kind_ = g.kind_;
  if (g.kind_ == GroupKind::Zd) {
    if (g.data_.size() != h.data_.size())
      throw UsageError("compose: Z^d elements of different dimension");
    out.data_.resize(g.data_.size());
    for (std::size_t i = 0; i < g.data_.size(); ++i) out.data_[i] = g.data_[i] + h.data_[i];
    return out;
  }
  // Cancel the longest suffix of g against the prefix of h, then concatenate.
  std::size_t cancel = 0;
  while (cancel < g.data_.size() && cancel < h.data_.size() &&
         g.data_[g.data_.size() - 1 - cancel] == (h.data_[cancel] ^ 1)) {
    ++cancel;
  }
  out.data_.assign(g.data_.begin(), g.data_.end() - static_cast<std::ptrdiff_t>(cancel));
  out.data_.insert(out.data_.end(), h.data_.begin() + static_cast<std::ptrdiff_t>(cancel),
                   h.data_.end());
  return out;
}

inline GroupElement inverse(const GroupElement& g) {
  GroupElement out;
  out.kind_ = g.kind_;
  if (g.kind_ == GroupKind::Zd) {
    out.data_.resize(g.data_.size());
    for (std::size_t i = 0; i < g.data_.size(); ++i) out.data_[i] = -g.data_[i];
    return out;
  }
  out.data_.assign(g.data_.rbegin(), g.data_.rend());
  for (auto& c : out.data_) c ^= 1;
  return out;
}

inline GroupElement operator*(const GroupElement& g, const GroupElement& h) { return compose(g, h); }

inline std::strong_ordering canonical_cmp(const GroupElement& g, const GroupElement& h) {
  if (g.kind() != h.kind()) throw UsageError("canonical_cmp: elements of different groups");
  return g <=> h;
}

/// The standard generators of the group (e_1..e_d, or a, b, ...).
inline std::vector<GroupElement> generators(const GroupSpec& spec) {
  std::vector<GroupElement> gens;
  for (int i = 0; i < spec.rank; ++i) {
    if (spec.kind == GroupKind::Zd) {
      std::vector<std::int32_t> c(static_cast<std::size_t>(spec.rank), 0);
      c[static_cast<std::size_t>(i)] = 1;
      gens.push_back(GroupElement::zd(c));
    } else {
      gens.push_back(GroupElement::free_word(std::vector<std::int32_t>{2 * i}));
    }
  }
  return gens;
}

/// Sorted, duplicate-free list of group elements.
class FiniteSubset {
 public:
  FiniteSubset() = default;
  FiniteSubset(std::initializer_list<GroupElement> items) : FiniteSubset(std::vector(items)) {}
  explicit FiniteSubset(std::vector<GroupElement> items) : elems_(std::move(items)) {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  const std::vector<GroupElement>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  const GroupElement& operator[](std::size_t i) const { return elems_[i]; }

  bool contains(const GroupElement& g) const {
    return std::binary_search(elems_.begin(), elems_.end(), g);
  }

  /// Position in canonical order, or size() when absent.
  std::size_t index_of(const GroupElement& g) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), g);
    if (it == elems_.end() || !(*it == g)) return elems_.size();
    return static_cast<std::size_t>(it - elems_.begin());
  }

  bool is_subset_of(const FiniteSubset& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  FiniteSubset unite(const FiniteSubset& other) const {
    std::vector<GroupElement> out;
    std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                   std::back_inserter(out));
    FiniteSubset s;
    s.elems_ = std::move(out);
    return s;
  }

  FiniteSubset inverted() const {
    std::vector<GroupElement> out;
    out.reserve(elems_.size());
    for (const auto& g : elems_) out.push_back(inverse(g));
    return FiniteSubset(std::move(out));
  }

  friend bool operator==(const FiniteSubset&, const FiniteSubset&) = default;

 private:
  std::vector<GroupElement> elems_;
};

/// {e f : e in lhs, f in rhs}.
inline FiniteSubset product_set(const FiniteSubset& lhs, const FiniteSubset& rhs) {
  std::vector<GroupElement> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto& e : lhs)
    for (const auto& f : rhs) out.push_back(compose(e, f));
  return FiniteSubset(std::move(out));
}

/// Word-length ball: L1 ball in Z^d, reduced words of length <= radius in F_r.
inline FiniteSubset ball(const GroupSpec& spec, int radius) {
  std::vector<GroupElement> out;
  if (radius < 0) return FiniteSubset{};
  if (spec.kind == GroupKind::Zd) {
    std::vector<std::int32_t> c(static_cast<std::size_t>(spec.rank), -radius);
    // Odometer over the box, keeping points with |c|_1 <= radius.
    while (true) {
      int norm = 0;
      for (auto v : c) norm += std::abs(v);
      if (norm <= radius) out.push_back(GroupElement::zd(c));
      std::size_t i = 0;
      while (i < c.size() && c[i] == radius) c[i++] = -radius;
      if (i == c.size()) break;
      ++c[i];
    }
    return FiniteSubset(std::move(out));
  }
  std::vector<std::vector<std::int32_t>> frontier{{}};
  out.push_back(GroupElement::identity(spec));
  for (int len = 1; len <= radius; ++len) {
    std::vector<std::vector<std::int32_t>> next;
    for (const auto& w : frontier) {
      for (std::int32_t code = 0; code < 2 * spec.rank; ++code) {
        if (!w.empty() && w.back() == (code ^ 1)) continue;
        auto v = w;
        v.push_back(code);
        out.push_back(GroupElement::free_word(v));
        next.push_back(std::move(v));
      }
    }
    frontier = std::move(next);
  }
  return FiniteSubset(std::move(out));
}

/// Centered box [-radius, radius]^d; only defined for Z^d.
inline FiniteSubset box(const GroupSpec& spec, int radius) {
  if (spec.kind != GroupKind::Zd) throw UsageError("box() requires Z^d");
  std::vector<GroupElement> out;
  if (radius < 0) return FiniteSubset{};
  std::vector<std::int32_t> c(static_cast<std::size_t>(spec.rank), -radius);
  while (true) {
    out.push_back(GroupElement::zd(c));
    std::size_t i = 0;
    while (i < c.size() && c[i] == radius) c[i++] = -radius;
    if (i == c.size()) break;
    ++c[i];
  }
  return FiniteSubset(std::move(out));
}

}  // namespace d1
