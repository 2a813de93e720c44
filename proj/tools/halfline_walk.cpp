#include <cstdio>

int main() {
    std::puts("halfline-walk: CLI wiring pending");
    return 0;
}
