#pragma once

// Countable Markov shifts: lazily answered transition rules, finite
// truncations (maximal subshifts on {1..N}), words and periodic orbits.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cmspress {

using json = nlohmann::json;

/// Nonnegative JSON integer, signed or unsigned.
inline bool is_count(const json& v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; }

/// A symbol of the alphabet, normalized to {1, 2, ...}.
struct VertexId {
  std::uint64_t index = 0;

  constexpr VertexId() = default;
  constexpr explicit VertexId(std::uint64_t i) : index(i) {}

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

using Word = std::vector<VertexId>;

/// Transition rule of a countable Markov shift. Implementations answer
/// queries for arbitrarily large indices without materializing the alphabet.
class Generator {
 public:
  virtual ~Generator() = default;

  virtual std::string name() const = 0;
  virtual json params() const { return json::object(); }
  virtual bool is_explicit() const { return false; }

  virtual bool allowed(VertexId a, VertexId b) const = 0;

  /// Sorted successors of `a` among {1..bound}. The default scans all of them.
  virtual std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const;

  /// Number of symbols when the alphabet is finite.
  virtual std::optional<std::uint64_t> alphabet_size() const { return std::nullopt; }

  virtual std::string label(VertexId v) const;
  virtual std::optional<VertexId> parse_label(std::string_view text) const;

  /// Integer reading of the label, used by vertex formulas (signed for Z-labelled shifts).
  virtual std::optional<std::int64_t> integer_label(VertexId v) const {
    return static_cast<std::int64_t>(v.index);
  }

  /// Infiniteness certificate: a vertex u > v joined to v by an edge in some
  /// direction such that iterating ray_step never stops. Sectors containing
  /// such a vertex are infinite.
  virtual std::optional<VertexId> ray_step(VertexId) const { return std::nullopt; }

  /// Finiteness certificate: v lies in a finite weak component of every tail
  /// {c+1, c+2, ...} that contains it.
  virtual bool finite_tail_component(VertexId) const { return false; }
};

class ShiftSpec {
 public:
  ShiftSpec() = default;
  explicit ShiftSpec(std::shared_ptr<const Generator> gen);

  /// Finite graph on {1..n}; edges are 1-based index pairs.
  static ShiftSpec explicit_finite(std::uint64_t n,
                                   std::vector<std::pair<std::uint64_t, std::uint64_t>> edges,
                                   std::vector<std::string> labels = {});

  bool allowed(VertexId a, VertexId b) const { return gen_->allowed(a, b); }
  std::vector<VertexId> successors(VertexId a, std::uint64_t bound) const {
    return gen_->successors(a, bound);
  }
  std::optional<std::uint64_t> alphabet_size() const { return gen_->alphabet_size(); }
  bool contains(VertexId v) const;

  std::string label(VertexId v) const { return gen_->label(v); }
  /// Throws ValidationError for labels outside the alphabet.
  VertexId parse_label(std::string_view text) const;
  std::optional<std::int64_t> integer_label(VertexId v) const { return gen_->integer_label(v); }
  std::optional<VertexId> ray_step(VertexId v) const { return gen_->ray_step(v); }
  bool finite_tail_component(VertexId v) const { return gen_->finite_tail_component(v); }

  std::string name() const { return gen_->name(); }
  bool is_explicit() const { return gen_->is_explicit(); }
  const Generator& generator() const { return *gen_; }

  json to_json() const;
  static ShiftSpec from_json(const json& j);

  friend bool operator==(const ShiftSpec& a, const ShiftSpec& b) { return a.to_json() == b.to_json(); }

 private:
  std::shared_ptr<const Generator> gen_;
};

/// Builds a named generator; throws ValidationError for unknown names.
ShiftSpec make_generator(const std::string& name, const json& params = json::object());
std::vector<std::string> generator_names();

/// The maximal subshift of finite type on {1..N}.
class TruncatedSFT {
 public:
  TruncatedSFT() = default;
  TruncatedSFT(ShiftSpec spec, std::uint64_t bound, std::vector<VertexId> vertices,
               std::vector<std::size_t> row_ptr, std::vector<std::uint32_t> cols);

  const ShiftSpec& spec() const { return spec_; }
  std::uint64_t bound() const { return bound_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  std::size_t edge_count() const { return cols_.size(); }

  std::span<const VertexId> vertices() const { return vertices_; }
  VertexId vertex(std::size_t local) const { return vertices_[local]; }
  std::optional<std::size_t> local_index(VertexId v) const;

  std::span<const std::uint32_t> successors(std::size_t local) const {
    return {cols_.data() + row_ptr_[local], cols_.data() + row_ptr_[local + 1]};
  }
  bool has_edge(std::size_t from, std::size_t to) const;

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> cols() const { return cols_; }

 private:
  ShiftSpec spec_;
  std::uint64_t bound_ = 0;
  std::vector<VertexId> vertices_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
};

struct PeriodicOrbit {
  Word word;  // closing transition word.back() -> word.front() is allowed
  std::size_t period() const { return word.size(); }
};

inline constexpr std::uint64_t kMaxTruncation = std::uint64_t{1} << 24;

/// Throws ValidationError when min(bound, alphabet size) exceeds kMaxTruncation.
TruncatedSFT truncate(const ShiftSpec& spec, std::uint64_t bound);

/// The truncation viewed as an explicit finite spec on {1..bound()}.
ShiftSpec as_spec(const TruncatedSFT& t);

bool is_admissible(const ShiftSpec& spec, std::span<const VertexId> word);

/// Primitivity of the adjacency matrix. Throws ValidationError on an empty subshift.
bool is_topologically_mixing(const TruncatedSFT& t);
bool is_irreducible(const TruncatedSFT& t);

/// Least M such that every ordered pair is joined by a path with at most M edges.
int mixing_bound(const TruncatedSFT& t);

/// All admissible words of length n in lexicographic order. Throws
/// ValidationError when more than `limit` words would be produced.
std::vector<Word> enumerate_words(const TruncatedSFT& t, std::size_t n,
                                  std::size_t limit = 5'000'000);

/// Closed words of length n (not necessarily primitive), lexicographic.
std::vector<PeriodicOrbit> periodic_orbits(const TruncatedSFT& t, std::size_t n,
                                           std::optional<VertexId> base = std::nullopt,
                                           bool primitive_only = false);

std::string format_word(const ShiftSpec& spec, std::span<const VertexId> word);

namespace labels {

/// Z <-> N bijection: 0 -> 1, z > 0 -> 2z, z < 0 -> 2|z| + 1.
std::uint64_t index_of_integer(std::int64_t z);
std::int64_t integer_of_index(std::uint64_t index);

/// Breadth-first numbering of words over {1,3}: empty word -> 1, then by
/// length, reading 1 as bit 0 and 3 as bit 1 (first symbol most significant).
std::string tree_word(std::uint64_t index);
std::uint64_t tree_index(std::string_view word);

}  // namespace labels

/// Vertex numbering of a loop system: vertex 1 is the hub, followed by the
/// p(n) loops of length n (n = 2, 3, ...), each contributing n - 1 vertices.
class LoopSystemLayout {
 public:
  /// p(n) is p_values[n-1] for n <= size, and `tail` beyond. p(1) must be 0 or 1.
  LoopSystemLayout(std::vector<std::uint64_t> p_values, std::uint64_t tail);

  struct Position {
    std::uint64_t length = 0;  // n
    std::uint64_t copy = 0;    // k, 1-based
    std::uint64_t step = 0;    // i in 1..n-1
    std::uint64_t loop = 0;    // global loop number, 1-based
  };

  std::uint64_t p(std::uint64_t n) const;
  bool hub_loop() const { return p(1) >= 1; }
  std::optional<std::uint64_t> vertex_count() const { return finite_count_; }

  /// Position of a non-hub vertex; nullopt for the hub or beyond the alphabet.
  std::optional<Position> locate(VertexId v) const;
  VertexId vertex_at(std::uint64_t length, std::uint64_t copy, std::uint64_t step) const;
  /// Index of the first vertex of the loops of length n, if tabulated.
  std::optional<std::uint64_t> loop_start(std::uint64_t n) const;

  const std::vector<std::uint64_t>& p_values() const { return p_values_; }
  std::uint64_t tail() const { return tail_; }

 private:
  std::vector<std::uint64_t> p_values_;
  std::uint64_t tail_;
  std::optional<std::uint64_t> finite_count_;
  // starts_[n] = first index of loops of length n; loops_before_[n] likewise
  // for loop numbers. Tabulated up to index 2^32.
  std::vector<std::uint64_t> starts_;
  std::vector<std::uint64_t> loops_before_;
};

}  // namespace cmspress
