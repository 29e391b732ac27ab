#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thurston {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed rule document: missing field, dangling id, bad topology.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The rule has a periodic critical point; towers are refused.
class GateError : public Error {
 public:
  using Error::Error;
};

/// Depth or memory cap would be exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A query referenced a cell, node or level that does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed. This is a bug trap, not a user error.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

#define THURSTON_CHECK(cond, msg)                                                    \
  do {                                                                               \
    if (!(cond)) throw ::thurston::InvariantViolation(std::string(__func__) + ": " + (msg)); \
  } while (0)

// ---------------------------------------------------------------------------
// Handles

inline constexpr std::uint32_t kInvalidIndex = std::numeric_limits<std::uint32_t>::max();

/// Dense per-level index. The tag keeps vertices, edges and tiles apart.
template <class Tag>
struct Handle {
  std::uint32_t value = kInvalidIndex;

  constexpr Handle() = default;
  constexpr explicit Handle(std::uint32_t v) : value(v) {}

  [[nodiscard]] constexpr bool valid() const { return value != kInvalidIndex; }
  [[nodiscard]] constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(Handle, Handle) = default;
};

using VertexId = Handle<struct VertexTag>;
using EdgeId = Handle<struct EdgeTag>;
using TileId = Handle<struct TileTag>;

enum class Color : std::uint8_t { white = 0, black = 1 };

constexpr Color opposite(Color c) { return c == Color::white ? Color::black : Color::white; }

inline std::string_view to_string(Color c) { return c == Color::white ? "white" : "black"; }

inline Color color_from_string(std::string_view s) {
  if (s == "white") return Color::white;
  if (s == "black") return Color::black;
  throw SchemaError("unknown color '" + std::string(s) + "'");
}

/// Where a cell sits relative to the invariant curve.
///
/// On the curve the position is an exact fraction `num/den` along the 0-edge,
/// where `den` is the number of segments that 0-edge has at the cell's level.
/// A 0-vertex p_k is stored as position 0 on 0-edge k.
struct Location {
  enum class Kind : std::uint8_t { on_curve, interior };

  Kind kind = Kind::interior;
  std::uint32_t zero_edge = 0;
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  Color region = Color::white;

  static Location on_curve(std::uint32_t edge, std::uint64_t num, std::uint64_t den) {
    Location l;
    l.kind = Kind::on_curve;
    l.zero_edge = edge;
    l.num = num;
    l.den = den;
    return l;
  }
  static Location interior(Color region) {
    Location l;
    l.kind = Kind::interior;
    l.region = region;
    return l;
  }

  [[nodiscard]] bool is_on_curve() const { return kind == Kind::on_curve; }

  friend bool operator==(const Location&, const Location&) = default;
};

/// Rows of variable-length data in one flat buffer.
template <class T>
class Csr {
 public:
  Csr() : offsets_{0} {}

  void push_row(std::span<const T> row) {
    data_.insert(data_.end(), row.begin(), row.end());
    offsets_.push_back(static_cast<std::uint32_t>(data_.size()));
  }
  void push_row(std::initializer_list<T> row) { push_row(std::span<const T>(row.begin(), row.size())); }

  [[nodiscard]] std::span<const T> row(std::size_t i) const {
    return {data_.data() + offsets_[i], data_.data() + offsets_[i + 1]};
  }
  [[nodiscard]] std::span<T> row_mut(std::size_t i) {
    return {data_.data() + offsets_[i], data_.data() + offsets_[i + 1]};
  }
  [[nodiscard]] std::size_t rows() const { return offsets_.size() - 1; }
  [[nodiscard]] std::size_t total() const { return data_.size(); }

  void clear() {
    offsets_.assign(1, 0);
    data_.clear();
  }
  void reserve(std::size_t rows, std::size_t total) {
    offsets_.reserve(rows + 1);
    data_.reserve(total);
  }

  friend bool operator==(const Csr&, const Csr&) = default;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<T> data_;
};

}  // namespace thurston

template <class Tag>
struct std::hash<thurston::Handle<Tag>> {
  std::size_t operator()(thurston::Handle<Tag> h) const noexcept { return std::hash<std::uint32_t>{}(h.value); }
};
