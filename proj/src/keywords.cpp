#include "prao/keywords.hpp"

#include <algorithm>
#include <iterator>

namespace prao {

KeywordDictionary::KeywordDictionary(std::span<const KeywordId> all_ids)
    : ids_(all_ids.begin(), all_ids.end()) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  const std::size_t with_bits = std::min<std::size_t>(ids_.size(), kWidth);
  bit_of_.reserve(with_bits);
  for (std::size_t i = 0; i < with_bits; ++i) bit_of_.emplace(ids_[i], static_cast<int>(i));
}

int KeywordDictionary::bit(KeywordId id) const {
  auto it = bit_of_.find(id);
  return it == bit_of_.end() ? -1 : it->second;
}

KeywordBitmap bitmap_of(std::span<const KeywordId> keywords, const KeywordDictionary& dict) {
  KeywordBitmap out;
  for (KeywordId k : keywords) {
    const int b = dict.bit(k);
    if (b >= 0) {
      out.bits |= std::uint64_t{1} << b;
    } else {
      out.overflow.push_back(k);
    }
  }
  std::sort(out.overflow.begin(), out.overflow.end());
  out.overflow.erase(std::unique(out.overflow.begin(), out.overflow.end()), out.overflow.end());
  return out;
}

namespace {

bool sorted_intersect(const std::vector<KeywordId>& a, const std::vector<KeywordId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace

bool bitmap_intersects(const KeywordBitmap& a, const KeywordBitmap& b) {
  if ((a.bits & b.bits) != 0) return true;
  if (a.overflow.empty() || b.overflow.empty()) return false;
  return sorted_intersect(a.overflow, b.overflow);
}

KeywordBitmap bitmap_and(const KeywordBitmap& a, const KeywordBitmap& b) {
  KeywordBitmap out;
  out.bits = a.bits & b.bits;
  std::set_intersection(a.overflow.begin(), a.overflow.end(), b.overflow.begin(), b.overflow.end(),
                        std::back_inserter(out.overflow));
  return out;
}

}  // namespace prao
