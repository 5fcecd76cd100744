// Bidirectional string <-> dense index dictionary.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace pathsrl {

class Dict {
 public:
  Dict() = default;

  // Returns the existing index, or adds the entry when the dict is open.
  // Frozen dicts return -1 for unseen strings.
  int add(const std::string& key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (frozen_) return -1;
    const int id = static_cast<int>(items_.size());
    items_.push_back(key);
    index_.emplace(key, id);
    return id;
  }

  int lookup(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& name(int id) const { return items_.at(static_cast<std::size_t>(id)); }

  int size() const { return static_cast<int>(items_.size()); }
  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

  const std::vector<std::string>& items() const { return items_; }

  // Rebuild from a serialized item list.
  static Dict from_items(std::vector<std::string> items, bool frozen) {
    Dict d;
    d.items_ = std::move(items);
    for (int i = 0; i < static_cast<int>(d.items_.size()); ++i)
      d.index_.emplace(d.items_[static_cast<std::size_t>(i)], i);
    d.frozen_ = frozen;
    return d;
  }

  bool operator==(const Dict& other) const {
    return items_ == other.items_ && frozen_ == other.frozen_;
  }

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, int> index_;
  bool frozen_ = false;
};

}  // namespace pathsrl
