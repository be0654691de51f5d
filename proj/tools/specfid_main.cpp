#include <cstdio>

int main() {
    std::printf("specfid: pipeline under construction\n");
    return 0;
}
