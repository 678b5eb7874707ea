#include <vector>

int main() {
    // for (int i = 0; i < n; ++i) sum += v[i];
    std::vector<int> v(50, 1);
    int s = v[0] + v[1];
    int t = s * 2;
    int u = t - 1;
    int w = u + t;
    int z = w * u;
    return z > 0 ? 0 : 1;
}
