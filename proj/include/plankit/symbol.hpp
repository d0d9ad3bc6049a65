#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace plankit {

/// Interned, case-insensitive identifier. Text is normalized to lowercase
/// on interning, so two symbols compare equal iff their normalized text does.
///
/// Ordering follows interning order, which is stable within a process but
/// is not alphabetical. Use `text()` when a lexical order is needed.
class Symbol {
public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  const std::string& text() const;
  std::uint32_t id() const { return id_; }
  bool empty() const { return id_ == 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

private:
  std::uint32_t id_ = 0;  // 0 is the empty symbol
};

std::ostream& operator<<(std::ostream& os, Symbol s);

/// Lowercases ASCII letters; everything else is kept as is.
std::string normalize_identifier(std::string_view text);

}  // namespace plankit

template <>
struct std::hash<plankit::Symbol> {
  std::size_t operator()(plankit::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
