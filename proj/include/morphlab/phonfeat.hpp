// phonfeat.hpp -- segment inventories and the binary phonetic-feature code.
//
// Every phone is a fixed 12-bit feature vector; the 12th bit is reserved for
// the word-boundary pattern, which is not a segment. Networks consume and
// emit these vectors, so the feature table is the contract between the
// language generator and the models.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace morphlab {

inline constexpr int kFeatureCount = 12;

enum Feature : int {
  kConsonant = 0,
  kVoiced,
  kLabial,
  kCoronal,
  kDorsal,
  kNasal,
  kContinuant,
  kHigh,
  kLow,
  kBack,
  kRound,
  kBoundary,
};

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "consonant", "voiced", "labial", "coronal", "dorsal",   "nasal",
    "continuant", "high",  "low",    "back",    "round",    "boundary"};

using FeatureVector = std::array<std::uint8_t, kFeatureCount>;

struct Segment {
  char symbol;
  FeatureVector features;
};

/// The word-boundary input pattern: all zero except the boundary bit.
inline FeatureVector boundary_vector() {
  FeatureVector v{};
  v[kBoundary] = 1;
  return v;
}

inline Eigen::VectorXd to_input(const FeatureVector& f) {
  Eigen::VectorXd v(kFeatureCount);
  for (int i = 0; i < kFeatureCount; ++i) v[i] = static_cast<double>(f[i]);
  return v;
}

inline double feature_distance(const Eigen::VectorXd& v,
                               const FeatureVector& f) {
  double d2 = 0.0;
  for (int i = 0; i < kFeatureCount; ++i) {
    double d = v[i] - static_cast<double>(f[i]);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

class SegmentInventory {
 public:
  static SegmentInventory small_inventory();  // the 12-segment alphabet
  static SegmentInventory large_inventory();  // the 20-segment alphabet

  const std::string& name() const { return name_; }
  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  bool contains(char symbol) const { return index_of(symbol) >= 0; }

  const Segment& segment(char symbol) const {
    int i = index_of(symbol);
    if (i < 0)
      throw std::invalid_argument("unknown segment '" + std::string(1, symbol) +
                                  "' in inventory " + name_);
    return segments_[static_cast<std::size_t>(i)];
  }

  const FeatureVector& encode(char symbol) const { return segment(symbol).features; }

  /// Nearest segment to a real-valued output vector (Euclidean distance,
  /// ties broken by inventory order).
  const Segment& decode(const Eigen::VectorXd& v) const {
    if (v.size() != kFeatureCount)
      throw std::invalid_argument("decode: vector length " +
                                  std::to_string(v.size()) + ", expected 12");
    std::size_t best = 0;
    double best_d = feature_distance(v, segments_[0].features);
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      double d = feature_distance(v, segments_[i].features);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return segments_[best];
  }

  bool is_vowel(char symbol) const {
    return segment(symbol).features[kConsonant] == 0;
  }
  bool is_consonant(char symbol) const { return !is_vowel(symbol); }
  bool is_back_vowel(char symbol) const {
    const FeatureVector& f = segment(symbol).features;
    return f[kConsonant] == 0 && f[kBack] == 1;
  }

  std::vector<char> vowels() const {
    std::vector<char> out;
    for (const Segment& s : segments_)
      if (s.features[kConsonant] == 0) out.push_back(s.symbol);
    return out;
  }
  std::vector<char> consonants() const {
    std::vector<char> out;
    for (const Segment& s : segments_)
      if (s.features[kConsonant] == 1) out.push_back(s.symbol);
    return out;
  }

  /// Harmony partner of a vowel: same vector with `back` (and `round`,
  /// consistently) flipped. Only i/u and e/o pair up.
  char harmony_partner(char vowel) const {
    switch (vowel) {
      case 'i': return 'u';
      case 'u': return 'i';
      case 'e': return 'o';
      case 'o': return 'e';
      default:
        throw std::invalid_argument(std::string("no harmony partner for '") +
                                    vowel + "'");
    }
  }

  /// One row per segment: symbol + 12 tab-separated bits.
  void write_feature_table(std::ostream& os) const {
    os << "symbol";
    for (const char* n : kFeatureNames) os << '\t' << n;
    os << '\n';
    for (const Segment& s : segments_) {
      os << s.symbol;
      for (int i = 0; i < kFeatureCount; ++i)
        os << '\t' << static_cast<int>(s.features[i]);
      os << '\n';
    }
  }

 private:
  SegmentInventory(std::string name, std::vector<Segment> segments)
      : name_(std::move(name)), segments_(std::move(segments)) {
    index_.fill(-1);
    for (std::size_t i = 0; i < segments_.size(); ++i)
      index_[static_cast<unsigned char>(segments_[i].symbol)] =
          static_cast<int>(i);
  }

  int index_of(char symbol) const {
    return index_[static_cast<unsigned char>(symbol)];
  }

  std::string name_;
  std::vector<Segment> segments_;
  std::array<int, 256> index_;
};

namespace detail {

// Feature order: cons voi lab cor dor nas cont high low back round boundary.
inline Segment make_segment(char symbol,
                            std::initializer_list<int> set_features) {
  Segment s{symbol, FeatureVector{}};
  for (int f : set_features) s.features[static_cast<std::size_t>(f)] = 1;
  return s;
}

inline std::vector<Segment> core_consonants() {
  using namespace std;
  return {
      make_segment('f', {kConsonant, kLabial, kContinuant}),
      make_segment('d', {kConsonant, kVoiced, kCoronal}),
      make_segment('b', {kConsonant, kVoiced, kLabial}),
      make_segment('z', {kConsonant, kVoiced, kCoronal, kContinuant}),
      make_segment('t', {kConsonant, kCoronal}),
      make_segment('s', {kConsonant, kCoronal, kContinuant}),
      make_segment('p', {kConsonant, kLabial}),
      make_segment('n', {kConsonant, kVoiced, kCoronal, kNasal}),
  };
}

inline std::vector<Segment> core_vowels() {
  return {
      make_segment('i', {kVoiced, kHigh}),
      make_segment('e', {kVoiced}),
      make_segment('o', {kVoiced, kBack, kRound}),
      make_segment('u', {kVoiced, kHigh, kBack, kRound}),
  };
}

}  // namespace detail

inline SegmentInventory SegmentInventory::small_inventory() {
  std::vector<Segment> segs = detail::core_consonants();
  for (const Segment& v : detail::core_vowels()) segs.push_back(v);
  return SegmentInventory("small", std::move(segs));
}

inline SegmentInventory SegmentInventory::large_inventory() {
  using namespace detail;
  std::vector<Segment> segs = core_consonants();
  segs.push_back(make_segment('k', {kConsonant, kDorsal}));
  segs.push_back(make_segment('m', {kConsonant, kVoiced, kLabial, kNasal}));
  segs.push_back(make_segment('x', {kConsonant, kDorsal, kContinuant}));
  segs.push_back(make_segment('g', {kConsonant, kVoiced, kDorsal}));
  segs.push_back(
      make_segment('r', {kConsonant, kVoiced, kCoronal, kDorsal, kContinuant}));
  segs.push_back(make_segment(
      'w', {kConsonant, kVoiced, kLabial, kDorsal, kContinuant, kRound}));
  segs.push_back(
      make_segment('l', {kConsonant, kVoiced, kCoronal, kContinuant, kHigh}));
  for (const Segment& v : core_vowels()) segs.push_back(v);
  segs.push_back(make_segment('a', {kVoiced, kLow, kBack}));
  return SegmentInventory("large", std::move(segs));
}

}  // namespace morphlab
