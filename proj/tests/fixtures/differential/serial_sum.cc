#include <cstdio>

int main() {
  const int n = 800;
  long total = 0;
  for (int i = 0; i < n; ++i) total += i;
  double mean = static_cast<double>(total) / n;
  std::printf("sum %ld\nmean %.6f\n", total, mean);
  return 0;
}
