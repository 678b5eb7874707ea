#include <iostream>
#include <vector>

int main() {
    const int n = 64;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = i;
        b[i] = 2 * i;
    }
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        sum += a[i] * b[i];
    }
    std::cout << "sum = " << sum << std::endl;
    return 0;
}
