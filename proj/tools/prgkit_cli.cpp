#include <cstdio>

int main() {
    std::puts("prgkit: placeholder");
    return 0;
}
