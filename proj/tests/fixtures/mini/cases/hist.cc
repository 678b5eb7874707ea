#include <cstdio>
#include <vector>

int main() {
  const int n = 200000;
  const int bins = 16;
  std::vector<int> hist(bins, 0);
  for (int i = 0; i < n; ++i) {
    unsigned v = static_cast<unsigned>(i) * 2654435761u;
    hist[v % bins]++;
  }
  for (int b = 0; b < bins; ++b) std::printf("bin %d %d\n", b, hist[b]);
  return 0;
}
