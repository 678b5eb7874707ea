// #include <vector>
int main() {
    int a[100];
    for (int i = 0; i < 100; ++i) {
        a[i] = i * i;
    }
    int s = 0;
    for (int i = 0; i < 100; ++i) {
        s += a[i];
    }
    return s % 7;
}
