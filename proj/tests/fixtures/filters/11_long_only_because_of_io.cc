#include <iostream>
int main() {
    int s = 0;
    for (int i = 0; i < 10; ++i) {
        s += i;
        std::cout << "i = " << i << "\n";
        std::cout << "s = " << s << "\n";
    }
    std::cout << "done" << std::endl;
    std::cout << "sum " << s << std::endl;
    printf("%d\n", s);
    return 0;
}
