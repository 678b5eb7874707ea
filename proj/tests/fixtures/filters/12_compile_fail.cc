#include <vector>

int main() {
    std::vector<int> data(100);
    int hist[10] = {0};
    for (int i = 0; i < 100; i++) {
        data[i] = i * 7 % 10;
    }
    for (int i = 0; i < 100; i++) {
        hist[data[i]]++;
    }
    total = hist[0] + hist[9];
    return total;
}
