#include "limitcone/wordgen.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>
#include <unordered_set>

namespace limitcone::wordgen {

using hyp2::Isometry;

namespace {

constexpr char kFreeLetters[] = {'a', 'A', 'b', 'B'};

std::uint8_t invert(WordKind kind, std::uint8_t l) { return kind == WordKind::FreeRank2 ? l ^ 1 : l; }

std::vector<std::uint8_t> letterwise_inverse(WordKind kind, const std::vector<std::uint8_t>& w) {
  std::vector<std::uint8_t> out(w);
  for (auto& l : out) l = invert(kind, l);
  return out;
}

// True when no rotation of v is lexicographically smaller than w.
bool rotations_not_smaller(const std::vector<std::uint8_t>& w, const std::vector<std::uint8_t>& v) {
  std::size_t n = w.size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint8_t x = v[(r + i) % n];
      if (x < w[i]) return false;
      if (x > w[i]) break;
    }
  }
  return true;
}

std::vector<std::vector<std::uint8_t>> orbit_generators(WordKind kind, const std::vector<std::uint8_t>& w) {
  std::vector<std::uint8_t> rev(w.rbegin(), w.rend());
  if (kind == WordKind::EvenReflection) return {w, rev};
  return {w, rev, letterwise_inverse(kind, w), letterwise_inverse(kind, rev)};
}

bool is_canonical(WordKind kind, const std::vector<std::uint8_t>& w) {
  for (const auto& v : orbit_generators(kind, w)) {
    if (!rotations_not_smaller(w, v)) return false;
  }
  return true;
}

// Smallest period d < n dividing n, or n.
std::size_t period(const std::vector<std::uint8_t>& w) {
  std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return d;
  }
  return n;
}

bool excluded_power(WordKind kind, const std::vector<std::uint8_t>& w) {
  std::size_t d = period(w);
  if (d == w.size()) return false;
  // An even reflection word that is the square of an odd word is kept: its
  // root is not in the sampled group.
  return kind == WordKind::FreeRank2 || d % 2 == 0;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::string Word::to_string() const {
  std::string s;
  if (kind == WordKind::FreeRank2) {
    for (auto l : letters) s += kFreeLetters[l];
    return s;
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(letters[i] + 1);
  }
  return s;
}

Word Word::parse(WordKind kind, const std::string& text) {
  Word w{kind, {}};
  if (kind == WordKind::FreeRank2) {
    for (char c : text) {
      auto it = std::find(std::begin(kFreeLetters), std::end(kFreeLetters), c);
      if (it == std::end(kFreeLetters)) throw Error(ErrorCode::InvalidArgument, std::string("bad letter '") + c + "'");
      w.letters.push_back(static_cast<std::uint8_t>(it - std::begin(kFreeLetters)));
    }
    return w;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('.', pos);
    if (end == std::string::npos) end = text.size();
    int label = std::stoi(text.substr(pos, end - pos));
    if (label < 1 || label > 255) throw Error(ErrorCode::InvalidArgument, "bad reflection label");
    w.letters.push_back(static_cast<std::uint8_t>(label - 1));
    pos = end + 1;
  }
  return w;
}

Word Word::inverse() const {
  Word out{kind, {letters.rbegin(), letters.rend()}};
  for (auto& l : out.letters) l = invert(kind, l);
  return out;
}

Word Word::power(int k) const {
  Word out{kind, {}};
  for (int i = 0; i < k; ++i) out.letters.insert(out.letters.end(), letters.begin(), letters.end());
  return out;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.letters < b.letters;
}

Word canonical(const Word& w) {
  std::vector<std::uint8_t> best = w.letters;
  std::size_t n = w.size();
  for (const auto& v : orbit_generators(w.kind, w.letters)) {
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<std::uint8_t> rot(n);
      for (std::size_t i = 0; i < n; ++i) rot[i] = v[(r + i) % n];
      best = std::min(best, rot);
    }
  }
  return Word{w.kind, best};
}

std::vector<Word> enumerate_words(WordKind kind, int generators, int max_len) {
  if (max_len < 1) throw Error(ErrorCode::InvalidArgument, "max_len must be >= 1");
  if (kind == WordKind::FreeRank2 && generators != 2) {
    throw Error(ErrorCode::InvalidArgument, "free words use the two generators a, b");
  }
  if (kind == WordKind::EvenReflection && generators < 2) {
    throw Error(ErrorCode::InvalidArgument, "reflection words need at least two generators");
  }
  const int alphabet = kind == WordKind::FreeRank2 ? 4 : generators;

  // Independent subtrees keyed by the two-letter prefix.
  std::vector<std::array<std::uint8_t, 2>> prefixes;
  for (int x = 0; x < alphabet; ++x) {
    for (int y = 0; y < alphabet; ++y) {
      if (kind == WordKind::FreeRank2 && (x != 0 || y == 1)) continue;
      if (kind == WordKind::EvenReflection && (y == x || y < x)) continue;
      prefixes.push_back({static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)});
    }
  }

  std::vector<std::vector<Word>> parts(prefixes.size());
  parallel_for(prefixes.size(), 0, [&](std::size_t task) {
    std::vector<std::uint8_t> w{prefixes[task][0], prefixes[task][1]};
    auto accept = [&] {
      std::size_t n = w.size();
      if (kind == WordKind::EvenReflection && (n % 2 || w.back() == w.front())) return;
      if (kind == WordKind::FreeRank2 && w.back() == invert(kind, w.front())) return;
      if (excluded_power(kind, w) || !is_canonical(kind, w)) return;
      parts[task].push_back(Word{kind, w});
    };
    auto dfs = [&](auto&& self) -> void {
      accept();
      if (static_cast<int>(w.size()) == max_len) return;
      std::uint8_t last = w.back();
      for (int l = kind == WordKind::EvenReflection ? w.front() : 0; l < alphabet; ++l) {
        if (kind == WordKind::FreeRank2 && l == invert(kind, last)) continue;
        if (kind == WordKind::EvenReflection && l == last) continue;
        w.push_back(static_cast<std::uint8_t>(l));
        self(self);
        w.pop_back();
      }
    };
    if (max_len >= 2) dfs(dfs);
  });

  std::vector<Word> out;
  if (kind == WordKind::FreeRank2) {
    out.push_back(Word{kind, {0}});
    out.push_back(Word{kind, {2}});
  }
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

Representation free_rank2_images(const std::vector<std::pair<Isometry, Isometry>>& generators) {
  Representation reps;
  for (const auto& [a, b] : generators) reps.push_back({a, a.inverse(), b, b.inverse()});
  return reps;
}

Isometry evaluate(const std::vector<Isometry>& letters, const Word& w) {
  if (w.letters.empty()) throw Error(ErrorCode::InvalidArgument, "empty word");
  Isometry m = letters.at(w.letters[0]);
  for (std::size_t i = 1; i < w.size(); ++i) m = m * letters.at(w.letters[i]);
  return m;
}

std::vector<std::vector<double>> letter_log_norms(const Representation& reps) {
  std::vector<std::vector<double>> out;
  for (const auto& letters : reps) {
    std::vector<double> norms;
    for (const auto& m : letters) {
      Scalar row = max(abs(m.a()) + abs(m.b()), abs(m.c()) + abs(m.d()));
      norms.push_back(std::log2(row.to_double()));
    }
    out.push_back(std::move(norms));
  }
  return out;
}

Cloud jordan_cloud(const Representation& reps, const std::vector<Word>& words, unsigned threads) {
  struct Slot {
    std::optional<CloudPoint> point;
    std::optional<std::size_t> bad_component;
    bool unresolved = false;
    std::string key;
  };
  const auto log_norms = letter_log_norms(reps);
  std::vector<Slot> slots(words.size());
  const std::size_t batch = 256;
  std::size_t batches = (words.size() + batch - 1) / batch;
  parallel_for(batches, threads, [&](std::size_t b) {
    mpz_t z;
    mpz_init(z);
    for (std::size_t i = b * batch; i < std::min(words.size(), (b + 1) * batch); ++i) {
      const Word& w = words[i];
      Slot& slot = slots[i];
      cone::MultiLength ml;
      for (std::size_t c = 0; c < reps.size(); ++c) {
        Isometry m = evaluate(reps[c], w);
        if (m.orientation() < 0) throw Error(ErrorCode::OrientationReversing, "word " + w.to_string() + " reverses orientation");
        Scalar t = abs(m.trace());
        double log_bound = 16.0 - static_cast<double>(t.precision()) + std::log2(static_cast<double>(w.size()));
        for (auto l : w.letters) log_bound += log_norms[c][l];
        if (t <= 2 || t - 2 <= pow2(static_cast<long>(std::ceil(log_bound)), t.prec())) {
          slot.bad_component = c;
          slot.unresolved = t > 2;
          break;
        }
        Scalar scaled = t * pow2(64, t.prec());
        mpfr_get_z(z, scaled.raw(), MPFR_RNDN);
        char* hex = mpz_get_str(nullptr, 16, z);
        slot.key += hex;
        slot.key += ':';
        void (*release)(void*, std::size_t);
        mp_get_memory_functions(nullptr, nullptr, &release);
        release(hex, std::char_traits<char>::length(hex) + 1);
        ml.coords.push_back(acosh1p(t / 2 - 1) * 2);
      }
      if (!slot.bad_component) {
        cone::SimplexPoint sp = cone::projectivize(ml);
        slot.point = CloudPoint{w, std::move(ml), std::move(sp)};
      }
    }
    mpz_clear(z);
  });

  Cloud cloud;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].bad_component) {
      cloud.non_hyperbolic.push_back({words[i], *slots[i].bad_component, slots[i].unresolved});
      continue;
    }
    if (!seen.insert(std::move(slots[i].key)).second) {
      ++cloud.duplicates;
      continue;
    }
    cloud.points.push_back(std::move(*slots[i].point));
  }
  return cloud;
}

std::vector<Record> record_breaker_scan(const std::vector<CloudPoint>& cloud, const cone::Functional& omega) {
  if (cloud.empty()) throw Error(ErrorCode::EmptyCloud, "record-breaker scan of an empty cloud");
  if (!cone::azimuthal(omega)) throw Error(ErrorCode::InvalidArgument, "record breakers need an azimuthal functional");
  std::size_t i0 = 0;
  while (!(omega.c[i0] < 0)) ++i0;
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return cloud[x].ml.coords[i0] < cloud[y].ml.coords[i0]; });
  std::vector<Record> out;
  for (std::size_t k : order) {
    const auto& p = cloud[k];
    Scalar ratio = omega(p.ml.coords) / p.ml.coords[i0];
    if (out.empty() || ratio < out.back().ratio) out.push_back({p.word, p.ml.coords[i0], std::move(ratio)});
  }
  return out;
}

std::vector<Word> nonconjugacy_witness(const Representation& reps, WordKind kind, int max_len, const Scalar& tol) {
  std::size_t d = reps.size();
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "need at least two components");
  int generators = kind == WordKind::FreeRank2 ? 2 : static_cast<int>(reps.front().size());
  std::vector<std::vector<bool>> separated(d, std::vector<bool>(d, false));
  std::size_t missing = d * (d - 1) / 2;
  std::vector<Word> witness;
  for (const Word& w : enumerate_words(kind, generators, max_len)) {
    std::vector<Scalar> lengths;
    bool hyperbolic = true;
    for (const auto& r : reps) {
      Scalar t = abs(evaluate(r, w).trace());
      if (t <= 2) {
        hyperbolic = false;
        break;
      }
      lengths.push_back(acosh1p(t / 2 - 1) * 2);
    }
    if (!hyperbolic) continue;
    bool useful = false;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        if (separated[i][j]) continue;
        Scalar scale = max(Scalar(1L, lengths[i].prec()), max(lengths[i], lengths[j]));
        if (abs(lengths[i] - lengths[j]) > tol * scale) {
          separated[i][j] = true;
          --missing;
          useful = true;
        }
      }
    }
    if (useful) witness.push_back(w);
    if (missing == 0) return witness;
  }
  throw Error(ErrorCode::NotFound, "no separating words up to length " + std::to_string(max_len));
}

}  // namespace limitcone::wordgen
