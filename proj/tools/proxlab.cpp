#include <cstdio>

int main(int, char**) {
  std::puts("proxlab: command-line interface under construction");
  return 2;
}
