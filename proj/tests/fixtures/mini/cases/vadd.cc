#include <cstdio>
#include <cstdlib>
#include <vector>

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1000;
  std::vector<long> x(n), y(n), z(n);
  for (int i = 0; i < n; ++i) {
    x[i] = i;
    y[i] = 3L * i;
  }
  for (int i = 0; i < n; ++i) z[i] = x[i] + y[i];
  long check = 0;
  for (int i = 0; i < n; ++i) check += z[i] % 7;
  std::printf("n %d check %ld last %ld\n", n, check, z[n - 1]);
  return 0;
}
