#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace prao {

using KeywordId = std::uint32_t;

/// Maps keyword ids to bit positions of a 64-bit word. The first 64 distinct
/// ids (ascending) get a unique bit each; every other id is an overflow id and
/// is compared exactly, so a bitmap test never reports a false intersection.
class KeywordDictionary {
 public:
  static constexpr unsigned kWidth = 64;

  KeywordDictionary() = default;
  explicit KeywordDictionary(std::span<const KeywordId> all_ids);

  /// Bit position for `id`, or -1 when the id lives in the overflow set.
  int bit(KeywordId id) const;
  std::size_t size() const { return ids_.size(); }
  std::span<const KeywordId> ids() const { return ids_; }

 private:
  std::vector<KeywordId> ids_;  // sorted, distinct
  std::unordered_map<KeywordId, int> bit_of_;
};

struct KeywordBitmap {
  std::uint64_t bits = 0;
  std::vector<KeywordId> overflow;  // sorted, distinct

  bool empty() const { return bits == 0 && overflow.empty(); }
  bool operator==(const KeywordBitmap&) const = default;
};

KeywordBitmap bitmap_of(std::span<const KeywordId> keywords, const KeywordDictionary& dict);

/// True iff the two keyword sets share at least one id.
bool bitmap_intersects(const KeywordBitmap& a, const KeywordBitmap& b);

/// Keywords common to both sets (bitwise AND plus overflow intersection).
KeywordBitmap bitmap_and(const KeywordBitmap& a, const KeywordBitmap& b);

}  // namespace prao
