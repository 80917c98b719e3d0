#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "limitcone/fricke.hpp"
#include "limitcone/polygons.hpp"
#include "limitcone/wordgen.hpp"

using namespace limitcone;
using namespace limitcone::wordgen;

namespace {

const Precision P{256};

Scalar S(int v) { return Scalar(v, P); }

using Letters = std::vector<std::uint8_t>;

// Brute-force reference: every cyclically reduced word, reduced to the least
// element of its orbit under rotation, reversal and inversion.
std::uint8_t inv(WordKind kind, std::uint8_t l) { return kind == WordKind::FreeRank2 ? l ^ 1 : l; }

Letters orbit_min(WordKind kind, const Letters& w) {
  Letters rev(w.rbegin(), w.rend());
  Letters inverse = rev, mirrored = w;
  for (auto& l : inverse) l = inv(kind, l);
  for (auto& l : mirrored) l = inv(kind, l);
  Letters best = w;
  for (const Letters& v : {w, rev, inverse, mirrored}) {
    for (std::size_t r = 0; r < v.size(); ++r) {
      Letters rot(v.begin() + r, v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + r);
      best = std::min(best, rot);
    }
  }
  return best;
}

bool proper_power(WordKind kind, const Letters& w) {
  std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    if (kind == WordKind::EvenReflection && d % 2) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) periodic = w[i] == w[i - d];
    if (periodic) return true;
  }
  return false;
}

std::set<Letters> brute_force(WordKind kind, int alphabet, int max_len) {
  std::set<Letters> out;
  std::vector<Letters> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Letters> next;
    for (const auto& w : layer) {
      for (int l = 0; l < alphabet; ++l) {
        if (!w.empty() && (kind == WordKind::FreeRank2 ? l == inv(kind, w.back()) : l == w.back())) continue;
        Letters v = w;
        v.push_back(static_cast<std::uint8_t>(l));
        next.push_back(v);
      }
    }
    layer = std::move(next);
    for (const auto& w : layer) {
      bool cyclic = len == 1 || (kind == WordKind::FreeRank2 ? w.back() != inv(kind, w.front()) : w.back() != w.front());
      if (!cyclic) continue;
      if (kind == WordKind::EvenReflection && len % 2) continue;
      if (proper_power(kind, w) || orbit_min(kind, w) != w) continue;
      out.insert(w);
    }
  }
  return out;
}

std::set<Letters> as_set(const std::vector<Word>& words) {
  std::set<Letters> out;
  for (const auto& w : words) out.insert(w.letters);
  return out;
}

Representation fish_reps() {
  Scalar a = S(6), b = S(8);
  fricke::TorusRep rep = fricke::torus_rep_from_length_triples(
      {{2L * a, 2L * b, 2L * b}, {2L * b, 2L * a, 2L * b}, {2L * b, 2L * b, 2L * a}});
  std::vector<std::pair<hyp2::Isometry, hyp2::Isometry>> gens;
  for (std::size_t i = 0; i < 3; ++i) gens.push_back(rep.generators(i));
  return free_rank2_images(gens);
}

Representation hexagon_reps() {
  Scalar x = Scalar::parse("0.05", P);
  auto poly = polygons::build_chain_polygon(2, {x, 8L * x, x});
  Representation reps;
  for (int s = 0; s < 3; ++s) reps.push_back(polygons::reflection_generators(poly.shifted(s)));
  return reps;
}

bool rel_close(const Scalar& a, const Scalar& b, long bits) {
  return relative_error(a, b) < pow2(bits - P.bits, P);
}

}  // namespace

TEST_CASE("word text forms") {
  auto w = Word::parse(WordKind::FreeRank2, "aBAb");
  CHECK(w.letters == Letters{0, 3, 1, 2});
  CHECK(w.to_string() == "aBAb");
  CHECK(w.inverse().to_string() == "BabA");
  CHECK(w.power(2).to_string() == "aBAbaBAb");
  auto r = Word::parse(WordKind::EvenReflection, "1.3.12.2");
  CHECK(r.letters == Letters{0, 2, 11, 1});
  CHECK(r.to_string() == "1.3.12.2");
  CHECK(r.inverse().to_string() == "2.12.3.1");
  CHECK_THROWS_AS(Word::parse(WordKind::FreeRank2, "ax"), Error);
}

TEST_CASE("small enumerations") {
  auto one = enumerate_words(WordKind::FreeRank2, 2, 1);
  REQUIRE(one.size() == 2);
  CHECK(one[0].to_string() == "a");
  CHECK(one[1].to_string() == "b");

  std::set<std::string> two;
  for (const auto& w : enumerate_words(WordKind::FreeRank2, 2, 2)) two.insert(w.to_string());
  CHECK(two == std::set<std::string>{"a", "b", "ab", "aB"});

  auto pairs = enumerate_words(WordKind::EvenReflection, 6, 2);
  CHECK(pairs.size() == 15);
  for (const auto& w : pairs) CHECK(w.letters[0] < w.letters[1]);
}

TEST_CASE("enumeration matches brute force") {
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(as_set(enumerate_words(WordKind::FreeRank2, 2, n)) == brute_force(WordKind::FreeRank2, 4, n));
  }
  for (int g : {4, 6}) {
    for (int n = 2; n <= 6; n += 2) {
      CAPTURE(g);
      CAPTURE(n);
      CHECK(as_set(enumerate_words(WordKind::EvenReflection, g, n)) == brute_force(WordKind::EvenReflection, g, n));
    }
  }
  // (1.2.3)^2 survives: its root has odd length and is not in the even group.
  auto six = as_set(enumerate_words(WordKind::EvenReflection, 3, 6));
  CHECK(six.count(Letters{0, 1, 2, 0, 1, 2}) == 1);
  CHECK(six.count(Letters{0, 1, 0, 1}) == 0);
}

TEST_CASE("enumeration is sorted shortlex and canonical") {
  auto words = enumerate_words(WordKind::FreeRank2, 2, 7);
  CHECK(std::is_sorted(words.begin(), words.end(), shortlex_less));
  for (const auto& w : words) {
    CHECK(canonical(w) == w);
    CHECK(canonical(w.inverse()) == w);
  }
}

TEST_CASE("fish cloud basics") {
  auto reps = fish_reps();
  std::vector<Word> words{Word::parse(WordKind::FreeRank2, "a"), Word::parse(WordKind::FreeRank2, "aab"),
                          Word::parse(WordKind::FreeRank2, "BAA"), Word::parse(WordKind::FreeRank2, "aabaab")};
  auto cloud = jordan_cloud(reps, words, 2);
  // BAA inverts aab and is dropped as a duplicate; the square is kept.
  CHECK(cloud.duplicates == 1);
  REQUIRE(cloud.points.size() == 3);
  const auto& a = cloud.points[0];
  CHECK(rel_close(a.ml.coords[0], S(12), 16));
  CHECK(rel_close(a.ml.coords[1], S(16), 16));
  CHECK(rel_close(a.ml.coords[2], S(16), 16));

  const auto& w = cloud.points[1];
  const auto& w2 = cloud.points[2];
  for (int i = 0; i < 3; ++i) {
    CHECK(rel_close(w2.ml.coords[i], 2L * w.ml.coords[i], 32));
    CHECK(abs(w2.sp.bary[i] - w.sp.bary[i]) < pow2(32 - P.bits, P));
  }
}

TEST_CASE("lengths are invariant under inversion and conjugation") {
  auto reps = fish_reps();
  auto words = enumerate_words(WordKind::FreeRank2, 2, 6);
  for (std::size_t k = 0; k < words.size(); k += 7) {
    const Word& w = words[k];
    Word x = Word::parse(WordKind::FreeRank2, k % 2 ? "a" : "B");
    Word conj = x;
    auto xi = x.inverse();
    conj.letters.insert(conj.letters.end(), w.letters.begin(), w.letters.end());
    conj.letters.insert(conj.letters.end(), xi.letters.begin(), xi.letters.end());
    for (std::size_t c = 0; c < reps.size(); ++c) {
      Scalar t = abs(evaluate(reps[c], w).trace());
      CHECK(rel_close(abs(evaluate(reps[c], w.inverse()).trace()), t, 48));
      CHECK(rel_close(abs(evaluate(reps[c], conj).trace()), t, 48));
    }
  }
}

TEST_CASE("even reflection words projectivize like their squares") {
  auto reps = hexagon_reps();
  auto words = enumerate_words(WordKind::EvenReflection, 6, 4);
  auto cloud = jordan_cloud(reps, words, 1);
  CHECK_FALSE(cloud.points.empty());
  for (std::size_t k = 0; k < cloud.points.size(); k += 5) {
    const auto& p = cloud.points[k];
    auto sq = jordan_cloud(reps, {p.word.power(2)}, 1);
    REQUIRE(sq.points.size() == 1);
    for (int i = 0; i < 3; ++i) CHECK(abs(sq.points[0].sp.bary[i] - p.sp.bary[i]) < pow2(64 - P.bits, P));
  }
  // Adjacent sides meet at right angles: r_i r_{i+1} is elliptic.
  bool corner_reported = false;
  for (const auto& nh : cloud.non_hyperbolic) {
    if (nh.word.to_string() == "1.2") {
      corner_reported = true;
      CHECK_FALSE(nh.unresolved);
    }
  }
  CHECK(corner_reported);
}

TEST_CASE("record breakers") {
  auto reps = fish_reps();
  auto omega = cone::Functional::normalized({S(-1), S(1), S(1)});
  CHECK_THROWS_AS(record_breaker_scan({}, omega), Error);

  auto cloud = jordan_cloud(reps, enumerate_words(WordKind::FreeRank2, 2, 6), 2);
  std::vector<CloudPoint> single{cloud.points[3]};
  auto one = record_breaker_scan(single, omega);
  REQUIRE(one.size() == 1);
  CHECK(one[0].word == cloud.points[3].word);

  auto records = record_breaker_scan(cloud.points, omega);
  REQUIRE_FALSE(records.empty());
  for (std::size_t i = 1; i < records.size(); ++i) {
    CHECK(records[i].ratio < records[i - 1].ratio);
    CHECK(records[i].length >= records[i - 1].length);
  }

  auto scaled = cloud.points;
  for (auto& p : scaled)
    for (auto& c : p.ml.coords) c *= 2L;
  auto again = record_breaker_scan(scaled, omega);
  REQUIRE(again.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].word == records[i].word);
    CHECK(again[i].ratio == records[i].ratio);
  }
}

TEST_CASE("non-conjugacy witnesses") {
  Scalar tol = pow2(-100, P);
  auto fish = nonconjugacy_witness(fish_reps(), WordKind::FreeRank2, 4, tol);
  REQUIRE_FALSE(fish.empty());
  CHECK(fish[0].to_string() == "a");
  // Together the words separate every pair of components.
  auto reps = fish_reps();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      bool separated = false;
      for (const auto& w : fish) {
        Scalar li = abs(evaluate(reps[i], w).trace()), lj = abs(evaluate(reps[j], w).trace());
        if (relative_error(li, lj) > S(1) / 1000L) separated = true;
      }
      CHECK(separated);
    }
  }

  auto hex = nonconjugacy_witness(hexagon_reps(), WordKind::EvenReflection, 4, tol);
  CHECK_FALSE(hex.empty());

  Representation same{fish_reps()[0], fish_reps()[0]};
  try {
    nonconjugacy_witness(same, WordKind::FreeRank2, 4, tol);
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}
