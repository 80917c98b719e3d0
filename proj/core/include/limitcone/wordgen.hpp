#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "limitcone/cone.hpp"
#include "limitcone/hyp2.hpp"

namespace limitcone::wordgen {

enum class WordKind { FreeRank2, EvenReflection };

// Free-rank-2 letters: 0 = a, 1 = A = a^-1, 2 = b, 3 = B = b^-1.
// Reflection letters: 0 .. n-1 for the reflections r_1 .. r_n.
struct Word {
  WordKind kind = WordKind::FreeRank2;
  std::vector<std::uint8_t> letters;

  std::size_t size() const { return letters.size(); }
  std::string to_string() const;
  static Word parse(WordKind kind, const std::string& text);
  Word inverse() const;
  Word power(int k) const;

  friend bool operator==(const Word&, const Word&) = default;
};

// Length first, then lexicographic.
bool shortlex_less(const Word& a, const Word& b);

// One representative per class under cyclic rotation, inversion and
// reversal; proper powers excluded. For EvenReflection, words have even
// length with no cyclically adjacent repeated letter. Sorted shortlex.
std::vector<Word> enumerate_words(WordKind kind, int generators, int max_len);

// Canonical representative of a word's class.
Word canonical(const Word& w);

// Per-component images of the letters: reps[i][letter].
using Representation = std::vector<std::vector<hyp2::Isometry>>;

// Images of a and b for each component, expanded to the four letters.
Representation free_rank2_images(const std::vector<std::pair<hyp2::Isometry, hyp2::Isometry>>& generators);

hyp2::Isometry evaluate(const std::vector<hyp2::Isometry>& letters, const Word& w);

// log2 of the max-row-sum norm of each letter image, per component.
std::vector<std::vector<double>> letter_log_norms(const Representation& reps);

struct CloudPoint {
  Word word;
  cone::MultiLength ml;
  cone::SimplexPoint sp;
};

struct NonHyperbolicWord {
  Word word;
  std::size_t component;
  // |trace| exceeds 2 by less than the rounding bound of the product, so the
  // word cannot be told apart from an elliptic or parabolic one.
  bool unresolved = false;
};

struct Cloud {
  std::vector<CloudPoint> points;
  std::vector<NonHyperbolicWord> non_hyperbolic;
  std::size_t duplicates = 0;  // dropped by the rounded-trace dedup
};

// Multi-lengths of every word, deduplicated by the vector of |traces| rounded
// to 64 fractional bits. Words are processed in parallel batches; output order
// follows the input. A word counts as hyperbolic only when |trace| - 2 clears
// 2^(16 - p) n prod ||letter||, the rounding bound of an n-letter product.
Cloud jordan_cloud(const Representation& reps, const std::vector<Word>& words, unsigned threads = 0);

struct Record {
  Word word;
  Scalar length;  // in the coordinate of the negative coefficient
  Scalar ratio;   // Omega(ml) / length
};

// Running minima of Omega(ml) / ml_{i0} with the cloud sorted by ml_{i0},
// i0 the negative coefficient of the azimuthal functional omega.
std::vector<Record> record_breaker_scan(const std::vector<CloudPoint>& cloud, const cone::Functional& omega);

// Words that separate every pair of components by length beyond tol,
// searched by increasing word length. Throws NotFound when the enumeration
// up to max_len is exhausted.
std::vector<Word> nonconjugacy_witness(const Representation& reps, WordKind kind, int max_len, const Scalar& tol);

}  // namespace limitcone::wordgen
