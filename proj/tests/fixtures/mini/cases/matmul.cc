#include <cstdio>
#include <vector>

int main() {
  const int n = 96;
  std::vector<double> A(n * n), B(n * n), C(n * n, 0.0);
  for (int i = 0; i < n * n; ++i) {
    A[i] = (i % 13) * 0.25;
    B[i] = (i % 7) * 0.5;
  }
  double tmp;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      tmp = 0.0;
      for (int k = 0; k < n; ++k) tmp += A[i * n + k] * B[k * n + j];
      C[i * n + j] = tmp;
    }
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += C[i * n + i];
  std::printf("trace %.4f\n", trace);
  return 0;
}
