#include <cstdio>

// Placeholder entry point; the subcommand wiring lands with the report module.
int main() {
  std::fprintf(stderr, "aperiodica: command-line interface not wired up yet\n");
  return 64;
}
