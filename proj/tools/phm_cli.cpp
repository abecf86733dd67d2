// Experiment CLI; subcommands are filled in as the library lands.
#include <cstdio>

int main() {
  std::puts("phm: no subcommands wired yet");
  return 1;
}
