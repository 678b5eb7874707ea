#include <cstdio>
#include <vector>

int main() {
  const int n = 1 << 20;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = 0.5 * (i % 100);
    b[i] = 2.0;
  }
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += a[i] * b[i];
  std::printf("dot %.6f\n", dot);
  return 0;
}
