#include <cstdio>
#include <list>

int main() {
  std::list<int> values;
  for (int i = 0; i < 1000; ++i) values.push_back(i);
  long total = 0;
  for (std::list<int>::iterator it = values.begin(); it != values.end(); ++it) total += *it;
  std::printf("total %ld\n", total);
  return 0;
}
