#pragma once

#include <numeric>
#include <vector>

namespace oligo {

/// Calls fn(subset) for every k-subset of {0..n-1} in lexicographic order.
/// fn returns false to stop early; the function then returns false too.
template <class Fn>
bool for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return true;
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(c))) return false;
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return true;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

/// Calls fn(word) for every word of the given length over `alphabet`, in
/// lexicographic order of alphabet positions. Same early-stop convention.
template <class Fn>
bool for_each_word(const std::vector<int>& alphabet, int length, Fn&& fn) {
  if (alphabet.empty()) return length == 0 ? fn(std::vector<int>{}) : true;
  std::vector<int> pos(length, 0), w(length, alphabet[0]);
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(w))) return false;
    int i = length - 1;
    while (i >= 0 && pos[i] + 1 == static_cast<int>(alphabet.size())) {
      pos[i] = 0;
      w[i] = alphabet[0];
      --i;
    }
    if (i < 0) return true;
    w[i] = alphabet[++pos[i]];
  }
}

inline std::vector<int> iota_vector(int n, int start = 0) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), start);
  return v;
}

}  // namespace oligo
