#include <cstdio>
#include <cstdlib>
#include <omp.h>
#include <vector>

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 512;
  std::vector<double> A(static_cast<std::size_t>(n) * n), B(A.size()), C(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    A[i] = static_cast<double>(i % 17) * 0.5;
    B[i] = static_cast<double>(i % 11) * 0.25;
  }
  const double start = omp_get_wtime();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = A[static_cast<std::size_t>(i) * n + k];
      for (int j = 0; j < n; ++j) C[static_cast<std::size_t>(i) * n + j] += aik * B[static_cast<std::size_t>(k) * n + j];
    }
  const double elapsed = omp_get_wtime() - start;
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += C[static_cast<std::size_t>(i) * n + i];
  std::printf("trace %.3f\n", trace);
  std::printf("ELAPSED_SECONDS=%.6f\n", elapsed);
  return 0;
}
