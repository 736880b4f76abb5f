// Placeholder main; the full CLI lands with the harness module.
#include <iostream>

int main() {
  std::cout << "lina CLI\n";
  return 0;
}
