#include "plankit/symbol.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <ostream>
#include <unordered_map>

namespace plankit {

namespace {

class SymbolTable {
public:
  SymbolTable() { texts_.emplace_back(); }

  std::uint32_t intern(std::string_view raw) {
    std::string key = normalize_identifier(raw);
    std::lock_guard lock(mutex_);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(texts_.size());
    texts_.push_back(key);
    ids_.emplace(std::move(key), id);
    return id;
  }

  const std::string& text(std::uint32_t id) {
    std::lock_guard lock(mutex_);
    return texts_[id];
  }

private:
  std::mutex mutex_;
  std::deque<std::string> texts_;  // deque keeps references stable
  std::unordered_map<std::string, std::uint32_t> ids_;
};

SymbolTable& table() {
  static SymbolTable instance;
  return instance;
}

}  // namespace

std::string normalize_identifier(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Symbol::Symbol(std::string_view text) : id_(text.empty() ? 0 : table().intern(text)) {}

const std::string& Symbol::text() const { return table().text(id_); }

std::ostream& operator<<(std::ostream& os, Symbol s) { return os << s.text(); }

}  // namespace plankit
