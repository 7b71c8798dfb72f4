#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hchaos/core.hpp"
#include "hchaos/dynamics.hpp"
#include "hchaos/stadium.hpp"

namespace hchaos {

// ---------------------------------------------------------------------------------------
// Baker's map coding. L <-> 0, R <-> 1.

struct SymbolSequence {
  std::string past;    // most recent first: binary digits of p
  std::string future;  // binary digits of q

  friend bool operator==(const SymbolSequence&, const SymbolSequence&) = default;
};

inline char bit_symbol(int b) { return b ? 'R' : 'L'; }

inline void check_code(const std::string& code) {
  for (char c : code) {
    if (c != 'L' && c != 'R') throw Error(ErrorKind::invalid_input, "symbols must be L or R");
  }
}

inline std::string binary_digits(double x, std::size_t bits) {
  std::string out;
  out.reserve(bits);
  for (std::size_t i = 0; i < bits; ++i) {
    x *= 2.0;
    const int b = x >= 1.0 ? 1 : 0;
    out += bit_symbol(b);
    x -= b;
  }
  return out;
}

inline double digits_value(const std::string& s) {
  double v = 0.0, w = 0.5;
  for (char c : s) {
    if (c == 'R') v += w;
    w *= 0.5;
  }
  return v;
}

inline SymbolSequence baker_encode(const PhasePoint& x, std::size_t bits) {
  if (x.q < 0.0 || x.q >= 1.0 || x.p < 0.0 || x.p >= 1.0) {
    throw Error(ErrorKind::invalid_input, "baker point outside the unit square");
  }
  return {binary_digits(x.p, bits), binary_digits(x.q, bits)};
}

inline PhasePoint baker_decode(const SymbolSequence& s) {
  return {digits_value(s.future), digits_value(s.past)};
}

/// Shift the decimal point one symbol to the right (one forward baker step).
inline SymbolSequence shift(const SymbolSequence& s) {
  if (s.future.empty()) return s;
  return {s.future.substr(0, 1) + s.past, s.future.substr(1)};
}

/// Integer value I of a code read as a binary number (first symbol most significant).
inline std::uint64_t code_value(const std::string& code) {
  std::uint64_t v = 0;
  for (char c : code) v = 2 * v + (c == 'R' ? 1 : 0);
  return v;
}

/// Exact non-negative fraction num/den.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Fraction reduced() const {
    const std::uint64_t g = std::gcd(num, den);
    return g ? Fraction{num / g, den / g} : *this;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

struct ExactPoint {
  Fraction q, p;
  friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
};

/// Baker step in exact rational arithmetic.
inline ExactPoint baker_step_exact(const ExactPoint& x) {
  const Fraction q2{2 * x.q.num, x.q.den};
  const std::uint64_t b = q2.num >= q2.den ? 1 : 0;
  const Fraction qn = Fraction{q2.num - b * q2.den, q2.den}.reduced();
  const Fraction pn = Fraction{x.p.num + b * x.p.den, 2 * x.p.den}.reduced();
  return {qn, pn};
}

inline ExactPoint periodic_point_exact(const std::string& code) {
  check_code(code);
  if (code.empty()) throw Error(ErrorKind::invalid_input, "empty code");
  if (code.size() > 62) throw Error(ErrorKind::invalid_input, "code too long for exact form");
  if (code.find('L') == std::string::npos) {
    throw Error(ErrorKind::invalid_input, "all-R code aliases the origin");
  }
  const std::uint64_t den = (std::uint64_t{1} << code.size()) - 1;
  std::string rev(code.rbegin(), code.rend());
  return {Fraction{code_value(code), den}.reduced(), Fraction{code_value(rev), den}.reduced()};
}

/// q = I(code) / (2^n - 1), p = I(reverse code) / (2^n - 1).
inline PhasePoint periodic_point_from_code(const std::string& code) {
  const ExactPoint e = periodic_point_exact(code);
  return {e.q.value(), e.p.value()};
}

/// Codes of length n that are not all-R; each gives one fixed point of T^n.
inline std::vector<std::string> all_codes(std::size_t n) {
  std::vector<std::string> out;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 0; i + 1 < count; ++i) {
    std::string c(n, 'L');
    for (std::size_t k = 0; k < n; ++k) {
      if ((i >> (n - 1 - k)) & 1u) c[k] = 'R';
    }
    out.push_back(c);
  }
  return out;
}

/// Centroids of the depth-n itinerary strips of the baker's map, one per q-code. T^n is
/// affine on each strip, so Newton from the centroid lands on the strip's fixed point.
inline std::vector<PhasePoint> baker_partition_seeds(std::size_t n) {
  if (n > 24) throw Error(ErrorKind::budget, "too many strips");
  const std::size_t count = std::size_t{1} << n;
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back({(k + 0.5) / count, 0.5});
  return out;
}

/// Homoclinic sequence ...core core prefix . suffix core core..., truncated at `bits`.
inline SymbolSequence homoclinic_code(const std::string& core, const std::string& prefix,
                                      const std::string& suffix, std::size_t bits) {
  check_code(core);
  check_code(prefix);
  check_code(suffix);
  if (core.empty()) throw Error(ErrorKind::invalid_input, "empty core");
  SymbolSequence s;
  s.future = suffix;
  while (s.future.size() < bits) s.future += core;
  s.future.resize(bits);
  const std::string rcore(core.rbegin(), core.rend());
  s.past = std::string(prefix.rbegin(), prefix.rend());
  while (s.past.size() < bits) s.past += rcore;
  s.past.resize(bits);
  return s;
}

// ---------------------------------------------------------------------------------------
// Stadium itinerary partition.

struct PartitionOptions {
  std::size_t grid_q = 2048;
  std::size_t grid_p = 2048;
  double area_floor = 5e-6;  // minimum cell area as a fraction of the chart area
  int connectivity = 4;      // 4 or 8 neighbour flood fill
  unsigned threads = 0;
};

struct PartitionCell {
  std::uint64_t label = 0;
  std::size_t pixels = 0;
  double area_fraction = 0.0;
  PhasePoint centroid;  // a sample pixel inside the cell
};

struct ItineraryPartition {
  double gamma = 1.0;
  std::size_t n = 0;
  std::size_t grid_q = 0, grid_p = 0;
  double area_floor = 0.0;
  std::vector<PartitionCell> cells;        // cells at or above the floor
  std::size_t below_floor = 0;             // components dropped by the floor
  std::size_t unresolved = 0;              // pixels whose itinerary failed (tangency)
  std::vector<std::uint64_t> pixel_label;  // row-major [iq * grid_p + ip]
  std::vector<std::int32_t> pixel_cell;    // component id or -1

  std::size_t count() const { return cells.size(); }
};

/// Partition symbol for one transition: piece (2 bits) plus a rotation-sense flag on
/// arc-to-same-arc transitions (2 bits: 0 none, 1 advancing in q, 2 retreating).
/// Label packs n transitions and the final piece, 4 bits each, with a leading 1 bit.
inline std::uint64_t stadium_itinerary_label(const Stadium& s, PhasePoint x, std::size_t n) {
  std::uint64_t label = 1;
  Piece cur = s.piece_of(x.q);
  for (std::size_t k = 0; k < n; ++k) {
    const Bounce b = s.bounce(x);
    unsigned sense = 0;
    if (is_arc(cur) && b.to == cur) sense = x.p > 0.0 ? 1u : 2u;
    label = (label << 4) | (static_cast<unsigned>(cur) << 2) | sense;
    x = b.next;
    cur = b.to;
  }
  label = (label << 4) | (static_cast<unsigned>(cur) << 2);
  return label;
}

inline std::string label_string(std::uint64_t label) {
  std::vector<unsigned> sym;
  while (label > 1) {
    sym.push_back(static_cast<unsigned>(label & 15u));
    label >>= 4;
  }
  std::string out;
  static const char* names = "RBLT";
  for (auto it = sym.rbegin(); it != sym.rend(); ++it) {
    out += names[*it >> 2];
    if ((*it & 3u) == 1u) out += '+';
    if ((*it & 3u) == 2u) out += '-';
  }
  return out;
}

inline ItineraryPartition stadium_partition(double gamma, std::size_t n,
                                            const PartitionOptions& opt = {}) {
  if (n < 1 || n > 14) throw Error(ErrorKind::invalid_input, "partition depth must be 1..14");
  const Stadium s(gamma);
  ItineraryPartition part;
  part.gamma = gamma;
  part.n = n;
  part.grid_q = opt.grid_q;
  part.grid_p = opt.grid_p;
  part.area_floor = opt.area_floor;
  const std::size_t NQ = opt.grid_q, NP = opt.grid_p;
  const double P = s.perimeter();
  part.pixel_label.assign(NQ * NP, 0);
  constexpr std::uint64_t kBad = 0;

  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < NQ; i += nt) {
      const double q = P * (i + 0.5) / NQ;
      for (std::size_t j = 0; j < NP; ++j) {
        const double p = -1.0 + 2.0 * (j + 0.5) / NP;
        try {
          part.pixel_label[i * NP + j] = stadium_itinerary_label(s, {q, p}, n);
        } catch (const Error&) {
          part.pixel_label[i * NP + j] = kBad;
        }
      }
    }
  };
  if (nt <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // 4-neighbour flood fill; q wraps around the boundary, p does not.
  part.pixel_cell.assign(NQ * NP, -1);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> comp_pixels;
  std::vector<std::uint64_t> comp_label;
  std::vector<std::size_t> comp_seed;
  for (std::size_t start = 0; start < NQ * NP; ++start) {
    if (part.pixel_cell[start] >= 0) continue;
    const std::uint64_t lab = part.pixel_label[start];
    if (lab == kBad) {
      ++part.unresolved;
      continue;
    }
    const auto id = static_cast<std::int32_t>(comp_pixels.size());
    std::size_t count = 0;
    stack.push_back(start);
    part.pixel_cell[start] = id;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      ++count;
      const std::size_t i = k / NP, j = k % NP;
      const std::size_t ip = (i + 1) % NQ, im = (i + NQ - 1) % NQ;
      std::size_t nb[8];
      int nn = 0;
      nb[nn++] = ip * NP + j;
      nb[nn++] = im * NP + j;
      if (j + 1 < NP) nb[nn++] = k + 1;
      if (j > 0) nb[nn++] = k - 1;
      if (opt.connectivity == 8) {
        if (j + 1 < NP) {
          nb[nn++] = ip * NP + j + 1;
          nb[nn++] = im * NP + j + 1;
        }
        if (j > 0) {
          nb[nn++] = ip * NP + j - 1;
          nb[nn++] = im * NP + j - 1;
        }
      }
      for (int t = 0; t < nn; ++t) {
        const std::size_t m = nb[t];
        if (part.pixel_cell[m] < 0 && part.pixel_label[m] == lab) {
          part.pixel_cell[m] = id;
          stack.push_back(m);
        }
      }
    }
    comp_pixels.push_back(count);
    comp_label.push_back(lab);
    comp_seed.push_back(start);
  }
  const double total = static_cast<double>(NQ * NP);
  std::vector<std::int32_t> remap(comp_pixels.size(), -1);
  for (std::size_t c = 0; c < comp_pixels.size(); ++c) {
    const double frac = comp_pixels[c] / total;
    if (frac < opt.area_floor) {
      ++part.below_floor;
      continue;
    }
    remap[c] = static_cast<std::int32_t>(part.cells.size());
    const std::size_t k = comp_seed[c];
    part.cells.push_back({comp_label[c], comp_pixels[c], frac,
                          {P * (k / NP + 0.5) / NQ, -1.0 + 2.0 * (k % NP + 0.5) / NP}});
  }
  for (auto& c : part.pixel_cell) {
    if (c >= 0) c = remap[c];
  }
  return part;
}

/// Upper bound on the topological entropy from partition growth.
inline double entropy_bound(std::size_t count_prev, std::size_t count_next) {
  if (count_prev == 0 || count_next == 0) throw Error(ErrorKind::invalid_input, "empty count");
  return std::log(static_cast<double>(count_next) / static_cast<double>(count_prev));
}

}  // namespace hchaos
