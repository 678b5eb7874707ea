#include <algorithm>
#include <functional>
#include <vector>
int main() {
  std::vector<int> v(100, 3);
  int over = 0;
#pragma omp parallel for reduction(+:over)
  for (int i = 0; i < 100; ++i)
    over += std::bind2nd([](int a, int b) { return a > b; }, 50)(v[i]);
  return over;
}
