#include <vector>
int main() {
  std::vector<int> h(10);
  int x = 0;
#pragma omp parallel for
  for (int i = 0; i < 100; ++i) {
#pragma omp atomic
    x = i * 2 + x * 3;
  }
  return x;
}
